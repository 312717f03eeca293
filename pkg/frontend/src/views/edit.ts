// Headline editing task: replaceable words are highlighted and clickable,
// one substitution is composed at a time, and the server's funniness
// estimate is shown after submission.

import { EditableHeadline, EditResponse } from '../api.js';
import { el, clear } from '../dom.js';
import { messageFor } from '../errors.js';

export interface EditCallbacks {
  submit(headlineId: string, index: number, word: string): Promise<EditResponse>;
  skip(headlineId: string): Promise<void>;
}

export function renderEditView(
  container: HTMLElement,
  headline: EditableHeadline,
  callbacks: EditCallbacks,
): void {
  clear(container);
  const replaceable = new Set(headline.replaceable);
  let selected: number | null = null;

  const meta = el('div', { class: 'headline-meta' }, [
    el('span', { class: 'source' }, [headline.source_name]),
    el('span', { class: 'category' }, [headline.category]),
    el('span', { class: 'published' }, [headline.published_at]),
    el('a', { href: headline.article_url, target: '_blank', rel: 'noopener' }, [
      'article',
    ]),
  ]);

  const wordInput = el('input', {
    class: 'substitute',
    type: 'text',
    placeholder: 'your word',
    disabled: '',
  });
  const submitButton = el('button', { class: 'submit-edit', disabled: '' }, [
    'Submit edit',
  ]);
  const skipButton = el('button', { class: 'skip' }, ['SKIP']);
  const estimate = el('div', { class: 'estimate' });
  const errorBox = el('div', { class: 'error', role: 'alert' });

  const syncControls = () => {
    const ready = selected !== null && wordInput.value.trim().length > 0;
    if (ready) submitButton.removeAttribute('disabled');
    else submitButton.setAttribute('disabled', '');
  };

  const tokens = headline.tokens.map((token, i) => {
    const isReplaceable = replaceable.has(i);
    const span = el(
      'span',
      { class: isReplaceable ? 'token replaceable' : 'token', 'data-index': String(i) },
      [token],
    );
    if (isReplaceable) {
      span.addEventListener('click', () => {
        selected = i;
        for (const other of tokenRow.querySelectorAll('.token')) {
          other.classList.remove('selected');
        }
        span.classList.add('selected');
        wordInput.removeAttribute('disabled');
        syncControls();
      });
    }
    return span;
  });
  const tokenRow = el('div', { class: 'tokens' });
  tokens.forEach((span, i) => {
    tokenRow.append(span);
    if (i < tokens.length - 1) tokenRow.append(' ');
  });

  wordInput.addEventListener('input', syncControls);

  const disableEditing = (explanation: string) => {
    submitButton.setAttribute('disabled', '');
    wordInput.setAttribute('disabled', '');
    errorBox.textContent = explanation;
  };

  submitButton.addEventListener('click', async () => {
    if (selected === null) return;
    errorBox.textContent = '';
    try {
      const result = await callbacks.submit(
        headline.headline_id,
        selected,
        wordInput.value.trim(),
      );
      estimate.textContent =
        result.estimate === null
          ? 'Submitted.'
          : `Estimated funniness: ${result.estimate.toFixed(1)}`;
    } catch (err: unknown) {
      const code = (err as { code?: string }).code ?? 'GAME_ERROR';
      if (code === 'CAP_REACHED' || code === 'SUSPENDED_PLAYER') {
        disableEditing(messageFor(code));
      } else {
        errorBox.textContent = messageFor(code);
      }
    }
  });

  skipButton.addEventListener('click', () => {
    void callbacks.skip(headline.headline_id);
  });

  container.append(
    meta,
    tokenRow,
    el('div', { class: 'edit-controls' }, [wordInput, submitButton, skipButton]),
    estimate,
    errorBox,
  );
}
