// Fixed API payloads for fixture tests; shapes mirror the server responses.

import { EditableHeadline, Leaderboards, MyFeedback, RateQueueItem } from '../src/api.js';

export const EDITABLE: EditableHeadline = {
  headline_id: 'h7',
  text: 'Sanders says he has more donors than Trump',
  tokens: ['Sanders', 'says', 'he', 'has', 'more', 'donors', 'than', 'Trump'],
  replaceable: [1, 5, 7],
  category: 'politics',
  source_name: 'wire',
  article_url: 'http://example.com/a',
  published_at: '2024-01-01T00:00:00+00:00',
};

export const QUEUE: RateQueueItem[] = [
  {
    edit_id: 'e1',
    text: 'Sanders says he has more hair than Trump',
    category: 'politics',
    source_name: 'wire',
    published_at: '2024-01-01T00:00:00+00:00',
  },
  {
    edit_id: 'e2',
    text: 'Mayor blocks new walrus deal after vote',
    category: 'worldnews',
    source_name: 'wire',
    published_at: '2024-01-01T00:01:00+00:00',
  },
];

// deliberately not sorted by value: rank order is the server's business
export const BOARDS: Leaderboards = {
  points_board: [
    { rank: 1, player: 'ann', value: 420 },
    { rank: 2, player: 'bob', value: 460 },
    { rank: 3, player: 'cee', value: 120 },
  ],
  mean_rating_board: [
    { rank: 1, player: 'cee', value: 2.4 },
    { rank: 2, player: 'ann', value: 2.1 },
  ],
  top10_funny: [
    { rank: 1, edit_id: 'e9', editor: 'ann', text: 'Senate approves kazoo budget', value: 2.8 },
    { rank: 2, edit_id: 'e4', editor: 'cee', text: 'Mayor unveils pickle statue', value: 2.6 },
  ],
};

export const ME: MyFeedback = {
  player_id: 'p1',
  standing: 'active',
  editor: {
    top5: [
      { edit_id: 'e9', text: 'Senate approves kazoo budget', mean_grade: 2.8, ratings: 5, created_at: '2024-01-01T00:00:00+00:00', state: 'fully_rated' },
      { edit_id: 'e2', text: 'Mayor blocks new walrus deal', mean_grade: 1.2, ratings: 5, created_at: '2024-01-02T00:00:00+00:00', state: 'fully_rated' },
    ],
    recent10: [
      { edit_id: 'e2', text: 'Mayor blocks new walrus deal', mean_grade: 1.2, ratings: 5, created_at: '2024-01-02T00:00:00+00:00', state: 'fully_rated' },
      { edit_id: 'e9', text: 'Senate approves kazoo budget', mean_grade: 2.8, ratings: 5, created_at: '2024-01-01T00:00:00+00:00', state: 'fully_rated' },
    ],
    abusive: [],
  },
  rater: {
    histogram: { '0': 3, '1': 10, '2': 6, '3': 1 },
    pct_over: 12.5,
    pct_under: 6.25,
    recent10: [{ edit_id: 'e4', grade: 2, at: '2024-01-02T00:00:00+00:00' }],
  },
  counts: { edits: 42, ratings: 180 },
  qualified: false,
  advice: { more_ratings: 20, more_edits: 0 },
};
