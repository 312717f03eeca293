// Headline rating task: four labeled grade buttons, a client-side dwell
// gate (the server enforces its own), consensus feedback after submit,
// and flag/skip controls. Works through a local queue of served items.

import { RateQueueItem, RatingResponse } from '../api.js';
import { el, clear } from '../dom.js';
import { messageFor } from '../errors.js';

export const DWELL_MS = 2000;

export const GRADE_LABELS: Record<number, string> = {
  0: 'Not funny at all',
  1: 'Only slightly funny',
  2: 'Funny',
  3: 'Very funny',
};

const FEEDBACK_TEXT: Record<string, string> = {
  close: 'Reasonably close to other ratings.',
  higher: 'Higher than other ratings.',
  lower: 'Lower than other ratings.',
};

export interface RateCallbacks {
  rate(editId: string, grade: number): Promise<RatingResponse>;
  flag(editId: string): Promise<void>;
  skip(editId: string): Promise<void>;
}

export function renderRateView(
  container: HTMLElement,
  queue: RateQueueItem[],
  callbacks: RateCallbacks,
): void {
  clear(container);
  const remaining = [...queue];

  const showNext = () => {
    clear(container);
    const item = remaining.shift();
    if (!item) {
      container.append(el('p', { class: 'empty' }, ['Nothing to rate right now.']));
      return;
    }
    let grade: number | null = null;
    let dwellElapsed = false;

    const text = el('p', { class: 'rate-text' }, [item.text]);
    const meta = el('div', { class: 'headline-meta' }, [
      el('span', { class: 'source' }, [item.source_name]),
      el('span', { class: 'category' }, [item.category]),
    ]);
    const submitButton = el('button', { class: 'submit-rating', disabled: '' }, [
      'Submit rating',
    ]);
    const feedback = el('div', { class: 'feedback' });
    const errorBox = el('div', { class: 'error', role: 'alert' });

    const syncSubmit = () => {
      if (dwellElapsed && grade !== null) submitButton.removeAttribute('disabled');
      else submitButton.setAttribute('disabled', '');
    };

    const gradeRow = el('div', { class: 'grades' });
    for (const value of [0, 1, 2, 3]) {
      const button = el(
        'button',
        { class: 'grade', 'data-grade': String(value) },
        [`${value} - ${GRADE_LABELS[value]}`],
      );
      button.addEventListener('click', () => {
        grade = value;
        for (const other of gradeRow.querySelectorAll('.grade')) {
          other.classList.remove('selected');
        }
        button.classList.add('selected');
        syncSubmit();
      });
      gradeRow.append(button);
    }

    // the submit gate opens only after the player has had time to read
    setTimeout(() => {
      dwellElapsed = true;
      syncSubmit();
    }, DWELL_MS);

    submitButton.addEventListener('click', async () => {
      if (grade === null) return;
      errorBox.textContent = '';
      try {
        const result = await callbacks.rate(item.edit_id, grade);
        feedback.textContent = result.feedback
          ? FEEDBACK_TEXT[result.feedback]
          : 'Thanks! Your rating is in.';
        // leave the feedback on screen; the player advances when ready
        submitButton.setAttribute('disabled', '');
        for (const b of gradeRow.querySelectorAll('.grade')) {
          b.setAttribute('disabled', '');
        }
        const nextButton = el('button', { class: 'next' }, ['Next headline']);
        nextButton.addEventListener('click', showNext);
        feedback.append(' ', nextButton);
      } catch (err: unknown) {
        const code = (err as { code?: string }).code ?? 'GAME_ERROR';
        errorBox.textContent = messageFor(code);
      }
    });

    const flagButton = el('button', { class: 'flag' }, ['Flag as abusive']);
    flagButton.addEventListener('click', async () => {
      await callbacks.flag(item.edit_id);
      showNext(); // flagged items leave the local queue immediately
    });
    const skipButton = el('button', { class: 'skip' }, ['SKIP']);
    skipButton.addEventListener('click', async () => {
      await callbacks.skip(item.edit_id);
      showNext();
    });

    container.append(
      meta,
      text,
      gradeRow,
      el('div', { class: 'rate-controls' }, [submitButton, flagButton, skipButton]),
      feedback,
      errorBox,
    );
  };

  showNext();
}
