// Leaderboards plus the personal performance dashboard. Rows render in
// server order with server values; nothing is recomputed or re-sorted here.

import { Leaderboards, MyFeedback, EditEntry } from '../api.js';
import { el, clear } from '../dom.js';

const QUALIFY = {
  edits: { min: 50, max: 150 },
  ratings: { min: 200, max: 500 },
};

function boardTable(title: string, rows: { rank: number; player: string; value: number }[],
                    cls: string): HTMLElement {
  const body = el('tbody');
  for (const row of rows) {
    body.append(el('tr', { 'data-rank': String(row.rank) }, [
      el('td', { class: 'rank' }, [String(row.rank)]),
      el('td', { class: 'player' }, [row.player]),
      el('td', { class: 'value' }, [String(row.value)]),
    ]));
  }
  return el('section', { class: cls }, [
    el('h2', {}, [title]),
    el('table', {}, [
      el('thead', {}, [el('tr', {}, [
        el('th', {}, ['#']), el('th', {}, ['player']), el('th', {}, ['value']),
      ])]),
      body,
    ]),
  ]);
}

function editList(title: string, entries: EditEntry[], cls: string): HTMLElement {
  const list = el('ul', { class: cls });
  for (const entry of entries) {
    list.append(el('li', { 'data-edit': entry.edit_id }, [
      el('span', { class: 'text' }, [entry.text]),
      el('span', { class: 'mean' }, [
        entry.mean_grade === null ? 'unrated' : entry.mean_grade.toFixed(2),
      ]),
      el('span', { class: 'n' }, [`${entry.ratings} ratings`]),
    ]));
  }
  return el('section', {}, [el('h3', {}, [title]), list]);
}

function progressBar(label: string, value: number, min: number, max: number): HTMLElement {
  const pct = Math.min(100, (value / max) * 100);
  const status = value >= min && value <= max ? 'in-range' : 'out-of-range';
  return el('div', { class: `progress ${status}`, 'data-kind': label }, [
    el('span', { class: 'label' }, [`${label}: ${value} (${min}-${max} to qualify)`]),
    el('div', { class: 'bar' }, [
      el('div', {
        class: 'fill',
        style: `width: ${pct.toFixed(1)}%`,
      }),
    ]),
  ]);
}

function adviceLine(advice: { more_ratings: number; more_edits: number }): string {
  if (advice.more_ratings > 0) {
    return `Rate ${advice.more_ratings} more headlines to maximize your balance points.`;
  }
  if (advice.more_edits > 0) {
    return `Edit ${advice.more_edits} more headlines to maximize your balance points.`;
  }
  return 'Your editing/rating balance is earning full points.';
}

export function renderDashboard(
  container: HTMLElement,
  boards: Leaderboards,
  me: MyFeedback,
): void {
  clear(container);

  const funnyBody = el('ul', { class: 'top-funny' });
  for (const row of boards.top10_funny) {
    funnyBody.append(el('li', { 'data-rank': String(row.rank) }, [
      el('span', { class: 'rank' }, [String(row.rank)]),
      el('span', { class: 'text' }, [row.text]),
      el('span', { class: 'value' }, [String(row.value)]),
    ]));
  }

  const histogram = el('div', { class: 'histogram' });
  for (const grade of ['0', '1', '2', '3']) {
    const count = me.rater.histogram[grade] ?? 0;
    histogram.append(el('div', { class: 'hist-bar', 'data-grade': grade }, [
      el('span', { class: 'count' }, [String(count)]),
    ]));
  }

  container.append(
    boardTable('Top points scorers', boards.points_board, 'points-board'),
    boardTable('Highest average ratings', boards.mean_rating_board, 'mean-board'),
    el('section', { class: 'funny-board' }, [
      el('h2', {}, ['Recent top 10 funny headlines']),
      funnyBody,
    ]),
    el('section', { class: 'me' }, [
      el('h2', {}, ['Your performance']),
      editList('Top 5 funniest edits', me.editor.top5, 'top5'),
      editList('10 most recent edits', me.editor.recent10, 'recent10'),
      editList('Removed as abusive', me.editor.abusive, 'abusive'),
      el('section', { class: 'rating-stats' }, [
        el('h3', {}, ['Your ratings']),
        histogram,
        el('p', { class: 'over-under' }, [
          `${me.rater.pct_over.toFixed(1)}% significantly above, ` +
          `${me.rater.pct_under.toFixed(1)}% significantly below others`,
        ]),
      ]),
      el('section', { class: 'qualification' }, [
        el('h3', {}, [me.qualified ? 'Qualified for prizes' : 'Qualification progress']),
        progressBar('edits', me.counts.edits, QUALIFY.edits.min, QUALIFY.edits.max),
        progressBar('ratings', me.counts.ratings, QUALIFY.ratings.min, QUALIFY.ratings.max),
      ]),
      el('p', { class: 'advice' }, [adviceLine(me.advice)]),
    ]),
  );
}
