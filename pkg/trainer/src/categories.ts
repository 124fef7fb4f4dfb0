/** The six waste classes, in the canonical (alphabetical) order shared with
 * the sortcell CSV schemas: this order fixes probability-column layout. */
export const CATEGORIES = ['cardboard', 'glass', 'metal', 'paper', 'plastic', 'trash'] as const;

export type Category = (typeof CATEGORIES)[number];

export const NUM_CLASSES = CATEGORIES.length;

export const PREDICTIONS_HEADER =
  'item_id,true_label,pred_label,' + CATEGORIES.map((c) => `p_${c}`).join(',');

export const HISTORY_HEADER = 'epoch,train_accuracy,val_accuracy';

/** Argmax with ties broken toward the lowest index, matching the consumer's
 * tie rule. */
export function argmaxIndex(values: ArrayLike<number>): number {
  let best = 0;
  for (let i = 1; i < values.length; i++) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}
