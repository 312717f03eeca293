// Session bootstrap and view switching. The server is the single source
// of truth; each tab re-fetches what it shows.

import { ApiClient } from './api.js';
import { el, clear } from './dom.js';
import { messageFor } from './errors.js';
import { renderEditView } from './views/edit.js';
import { renderRateView } from './views/rate.js';
import { renderDashboard } from './views/dashboard.js';

export async function startApp(root: HTMLElement, base = ''): Promise<void> {
  const api = new ApiClient(base);
  clear(root);

  const name = window.prompt('Pick a display name') || 'anonymous';
  const player = await api.createPlayer(name);
  const session = await api.createSession(player.player_id);
  api.setToken(session.token);

  const content = el('main', { class: 'content' });
  const status = el('div', { class: 'status' });

  const showEdit = async () => {
    try {
      const { items } = await api.editable();
      clear(content);
      if (!items.length) {
        content.append(el('p', {}, ['No headlines to edit right now.']));
        return;
      }
      renderEditView(content, items[0], {
        submit: (headlineId, index, word) => api.submitEdit(headlineId, index, word),
        skip: async (headlineId) => {
          await api.skip(headlineId);
          await showEdit();
        },
      });
    } catch (err: unknown) {
      status.textContent = messageFor((err as { code?: string }).code ?? '');
    }
  };

  const showRate = async () => {
    try {
      const { items } = await api.rateQueue();
      clear(content);
      renderRateView(content, items, {
        rate: (editId, grade) => api.submitRating(editId, grade),
        flag: async (editId) => {
          await api.flag(editId);
        },
        skip: async (editId) => {
          await api.skip(editId);
        },
      });
    } catch (err: unknown) {
      status.textContent = messageFor((err as { code?: string }).code ?? '');
    }
  };

  const showDashboard = async () => {
    try {
      const [boards, me] = await Promise.all([api.leaderboards(), api.myFeedback()]);
      clear(content);
      renderDashboard(content, boards, me);
    } catch (err: unknown) {
      status.textContent = messageFor((err as { code?: string }).code ?? '');
    }
  };

  const tabs = el('nav', { class: 'tabs' }, [
    el('button', { class: 'tab', 'data-view': 'edit' }, ['Edit']),
    el('button', { class: 'tab', 'data-view': 'rate' }, ['Rate']),
    el('button', { class: 'tab', 'data-view': 'dashboard' }, ['Dashboard']),
  ]);
  tabs.addEventListener('click', (event) => {
    const view = (event.target as HTMLElement).dataset?.view;
    if (view === 'edit') void showEdit();
    if (view === 'rate') void showRate();
    if (view === 'dashboard') void showDashboard();
  });

  root.append(tabs, status, content);
  await showEdit();
}
