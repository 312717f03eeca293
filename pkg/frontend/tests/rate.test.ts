import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { DWELL_MS, renderRateView } from '../src/views/rate.js';
import { ApiError, RatingResponse } from '../src/api.js';
import { QUEUE } from './fixtures.js';

function mount(callbacks: Partial<Parameters<typeof renderRateView>[2]> = {}) {
  const container = document.createElement('div');
  renderRateView(container, QUEUE, {
    rate:
      callbacks.rate ??
      (async () => ({
        accepted: true,
        count: 3,
        settled: false,
        feedback: 'close',
      }) as RatingResponse),
    flag: callbacks.flag ?? (async () => {}),
    skip: callbacks.skip ?? (async () => {}),
  });
  return container;
}

describe('rate view', () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it('offers exactly the four grades 0-3', () => {
    const view = mount();
    const grades = [...view.querySelectorAll<HTMLElement>('.grade')];
    expect(grades.map((g) => g.dataset.grade)).toEqual(['0', '1', '2', '3']);
    expect(grades[0].textContent).toContain('Not funny at all');
    expect(grades[3].textContent).toContain('Very funny');
  });

  it('keeps submit disabled until the dwell elapses and a grade is picked', () => {
    const view = mount();
    const submit = view.querySelector<HTMLButtonElement>('.submit-rating')!;
    const grades = [...view.querySelectorAll<HTMLElement>('.grade')];
    expect(submit.disabled).toBe(true);
    grades[2].click();
    expect(submit.disabled).toBe(true); // grade picked, dwell not elapsed
    vi.advanceTimersByTime(DWELL_MS - 1);
    expect(submit.disabled).toBe(true);
    vi.advanceTimersByTime(1);
    expect(submit.disabled).toBe(false);
  });

  it('dwell alone is not enough without a grade', () => {
    const view = mount();
    vi.advanceTimersByTime(DWELL_MS);
    expect(view.querySelector<HTMLButtonElement>('.submit-rating')!.disabled).toBe(true);
  });

  it('shows consensus feedback and advances only on demand', async () => {
    const rate = vi.fn(async () => ({
      accepted: true,
      count: 4,
      settled: false,
      feedback: 'lower' as const,
    }));
    const view = mount({ rate });
    [...view.querySelectorAll<HTMLElement>('.grade')][0].click();
    vi.advanceTimersByTime(DWELL_MS);
    view.querySelector<HTMLButtonElement>('.submit-rating')!.click();
    await vi.waitFor(() => {
      expect(view.querySelector('.feedback')!.textContent).toContain(
        'Lower than other ratings.',
      );
    });
    expect(rate).toHaveBeenCalledWith('e1', 0);
    view.querySelector<HTMLButtonElement>('.next')!.click();
    expect(view.querySelector('.rate-text')!.textContent).toBe(QUEUE[1].text);
  });

  it('maps TOO_FAST to a human message', async () => {
    const rate = vi.fn(async () => {
      throw new ApiError('TOO_FAST', 'dwell', 429);
    });
    const view = mount({ rate });
    [...view.querySelectorAll<HTMLElement>('.grade')][1].click();
    vi.advanceTimersByTime(DWELL_MS);
    view.querySelector<HTMLButtonElement>('.submit-rating')!.click();
    await vi.waitFor(() => {
      expect(view.querySelector('.error')!.textContent).toBe(
        'Please read the headline before rating it.',
      );
    });
  });

  it('flagging removes the item from the local queue', async () => {
    const flag = vi.fn(async () => {});
    const view = mount({ flag });
    expect(view.querySelector('.rate-text')!.textContent).toBe(QUEUE[0].text);
    view.querySelector<HTMLButtonElement>('.flag')!.click();
    await vi.waitFor(() => {
      expect(view.querySelector('.rate-text')!.textContent).toBe(QUEUE[1].text);
    });
    expect(flag).toHaveBeenCalledWith('e1');
  });

  it('skip advances to the next item', async () => {
    const skip = vi.fn(async () => {});
    const view = mount({ skip });
    view.querySelector<HTMLButtonElement>('.skip')!.click();
    await vi.waitFor(() => {
      expect(view.querySelector('.rate-text')!.textContent).toBe(QUEUE[1].text);
    });
    expect(skip).toHaveBeenCalledWith('e1');
  });

  it('shows an empty state when the queue runs out', async () => {
    const view = mount();
    view.querySelector<HTMLButtonElement>('.skip')!.click();
    await vi.waitFor(() => {
      expect(view.querySelector('.rate-text')!.textContent).toBe(QUEUE[1].text);
    });
    view.querySelector<HTMLButtonElement>('.skip')!.click();
    await vi.waitFor(() => {
      expect(view.querySelector('.empty')).not.toBeNull();
    });
  });
});
