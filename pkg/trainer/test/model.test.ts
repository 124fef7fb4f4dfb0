import * as tf from '@tensorflow/tfjs';
import { describe, expect, it } from 'vitest';

import { argmaxIndex, NUM_CLASSES } from '../src/categories.js';
import { backboneIsFrozen, buildModel, BackboneUnavailableError } from '../src/model.js';

const SMALL = { imageSize: 32, dropout: 0.3, denseUnits: 128, backbone: 'scratch' };

describe('model head contract', () => {
  it('maps a batch of 8 images to 8 probability rows summing to 1', async () => {
    const model = await buildModel(SMALL);
    const batch = tf.randomUniform([8, 32, 32, 3], 0, 1, 'float32', 7);
    const out = model.predict(batch) as tf.Tensor;
    expect(out.shape).toEqual([8, NUM_CLASSES]);
    const rows = (await out.array()) as number[][];
    for (const row of rows) {
      const sum = row.reduce((a, b) => a + b, 0);
      expect(Math.abs(sum - 1)).toBeLessThanOrEqual(1e-5);
      expect(argmaxIndex(row)).toBeGreaterThanOrEqual(0);
      expect(argmaxIndex(row)).toBeLessThan(NUM_CLASSES);
    }
  });

  it('keeps every backbone layer out of the trainable set', async () => {
    const model = await buildModel(SMALL);
    expect(backboneIsFrozen(model)).toBe(true);
    // trainable weights: dense kernel+bias and softmax kernel+bias
    expect(model.trainableWeights).toHaveLength(4);
  });

  it('honors dense-units and dropout settings', async () => {
    const model = await buildModel({ ...SMALL, denseUnits: 64 });
    const dense = model.getLayer('head_dense');
    expect((dense.getConfig() as { units: number }).units).toBe(64);
    const dropout = model.getLayer('head_dropout');
    expect((dropout.getConfig() as { rate: number }).rate).toBeCloseTo(0.3);
  });

  it('raises the environment error when the pretrained backbone is unreachable', async () => {
    await expect(
      buildModel({ ...SMALL, backbone: 'http://127.0.0.1:9/never/model.json' }),
    ).rejects.toThrow(BackboneUnavailableError);
  });
});
