// Every error code the server can emit, with a player-facing message.
// The exhaustiveness test keeps this in lockstep with the API.

export const API_ERROR_CODES = [
  'UNKNOWN_PLAYER',
  'UNKNOWN_HEADLINE',
  'SUSPENDED_PLAYER',
  'CAP_REACHED',
  'PAIR_CAP_REACHED',
  'DUPLICATE_RATING',
  'SELF_RATING',
  'SELF_FLAG',
  'ALREADY_REMOVED',
  'HEADLINE_NOT_IN_POOL',
  'HEADLINE_NOT_AVAILABLE',
  'EMPTY_DATASET',
  'TOO_FAST',
  'GRADE_OUT_OF_RANGE',
  'NOT_REPLACEABLE_INDEX',
  'SUBSTITUTE_EQUALS_ORIGINAL',
  'NOT_SINGLE_WORD',
  'BLACKLISTED_WORD',
  'EMPTY_OTHERS',
  'EMPTY_TEXT',
  'INVALID_CATEGORY',
  'NOT_SINGLE_SUBSTITUTION',
  'INSUFFICIENT_DATA',
  'NOT_FULLY_RATED',
  'UNKNOWN_KNOB',
  'INVALID_SESSION',
  'CORRUPT_LOG',
] as const;

export type ApiErrorCode = (typeof API_ERROR_CODES)[number];

const MESSAGES: Record<ApiErrorCode, string> = {
  UNKNOWN_PLAYER: 'That player does not exist.',
  UNKNOWN_HEADLINE: 'That headline is gone or never existed.',
  SUSPENDED_PLAYER: 'This account is suspended.',
  CAP_REACHED: 'You have reached the participation limit for this task.',
  PAIR_CAP_REACHED: 'You have rated enough headlines by this editor; others need your ratings too.',
  DUPLICATE_RATING: 'You already rated this headline.',
  SELF_RATING: 'You cannot rate your own headline.',
  SELF_FLAG: 'You cannot flag your own headline.',
  ALREADY_REMOVED: 'This headline was already removed.',
  HEADLINE_NOT_IN_POOL: 'This headline is no longer taking ratings.',
  HEADLINE_NOT_AVAILABLE: 'This headline is not open for editing.',
  EMPTY_DATASET: 'No fully rated headlines yet.',
  TOO_FAST: 'Please read the headline before rating it.',
  GRADE_OUT_OF_RANGE: 'Grades go from 0 to 3.',
  NOT_REPLACEABLE_INDEX: 'That word cannot be replaced; pick a highlighted one.',
  SUBSTITUTE_EQUALS_ORIGINAL: 'Pick a different word than the original.',
  NOT_SINGLE_WORD: 'The substitute must be a single word.',
  BLACKLISTED_WORD: 'That word is not allowed.',
  EMPTY_OTHERS: 'No other ratings to compare against yet.',
  EMPTY_TEXT: 'The headline text is empty.',
  INVALID_CATEGORY: 'Unknown news category.',
  NOT_SINGLE_SUBSTITUTION: 'Exactly one word must change.',
  INSUFFICIENT_DATA: 'Not enough data to compute this yet.',
  NOT_FULLY_RATED: 'This headline is not fully rated yet.',
  UNKNOWN_KNOB: 'Unknown setting.',
  INVALID_SESSION: 'Your session expired; please sign in again.',
  CORRUPT_LOG: 'The server hit a storage problem; try again later.',
};

export function messageFor(code: string, fallback = 'Something went wrong.'): string {
  return (MESSAGES as Record<string, string>)[code] ?? fallback;
}
