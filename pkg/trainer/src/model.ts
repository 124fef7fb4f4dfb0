import * as tf from '@tensorflow/tfjs';

import { NUM_CLASSES } from './categories.js';

export interface ModelConfig {
  imageSize: number;
  dropout: number;
  denseUnits: number;
  /** 'pretrained' fetches the hosted lightweight backbone (needs network),
   * 'scratch' builds a small randomly-initialized one; any other string is
   * treated as a tfjs layers-model URL/path to use as the backbone. */
  backbone: string;
}

export const DEFAULT_MODEL_CONFIG: ModelConfig = {
  imageSize: 128,
  dropout: 0.3,
  denseUnits: 128,
  backbone: 'pretrained',
};

const PRETRAINED_BACKBONE_URL =
  'https://storage.googleapis.com/tfjs-models/tfjs/mobilenet_v1_0.25_224/model.json';

/** Raised when the pretrained backbone cannot be fetched (offline hosts). */
export class BackboneUnavailableError extends Error {}

function scratchBackbone(input: tf.SymbolicTensor): tf.SymbolicTensor {
  // Small strided conv stack standing in for the pretrained feature
  // extractor when its weights cannot be downloaded. Frozen like the real
  // backbone so only the head trains.
  let x = input;
  for (const [i, filters] of [8, 16, 32].entries()) {
    x = tf.layers
      .conv2d({
        name: `backbone_conv_${i}`,
        filters,
        kernelSize: 3,
        strides: 2,
        padding: 'same',
        activation: 'relu',
        trainable: false,
      })
      .apply(x) as tf.SymbolicTensor;
  }
  return x;
}

async function pretrainedBackbone(url: string, input: tf.SymbolicTensor): Promise<tf.SymbolicTensor> {
  let backbone: tf.LayersModel;
  try {
    backbone = await tf.loadLayersModel(url);
  } catch (err) {
    throw new BackboneUnavailableError(
      `could not load pretrained backbone from ${url} (${(err as Error).message}); ` +
        'pass --backbone scratch for an offline randomly-initialized backbone',
    );
  }
  for (const layer of backbone.layers) layer.trainable = false;
  // Drop the stock classification head: use the last 4D feature map.
  let featureLayer = backbone.layers[backbone.layers.length - 1];
  for (let i = backbone.layers.length - 1; i >= 0; i--) {
    const shape = backbone.layers[i].outputShape as number[];
    if (Array.isArray(shape) && shape.length === 4) {
      featureLayer = backbone.layers[i];
      break;
    }
  }
  const features = tf.model({ inputs: backbone.inputs, outputs: featureLayer.output as tf.SymbolicTensor });
  features.trainable = false;
  return features.apply(input) as tf.SymbolicTensor;
}

/** Frozen feature extractor + global average pooling + dropout + ReLU dense
 * layer + softmax over the six classes. */
export async function buildModel(config: ModelConfig): Promise<tf.LayersModel> {
  const input = tf.input({ shape: [config.imageSize, config.imageSize, 3] });
  const features =
    config.backbone === 'scratch'
      ? scratchBackbone(input)
      : await pretrainedBackbone(
          config.backbone === 'pretrained' ? PRETRAINED_BACKBONE_URL : config.backbone,
          input,
        );
  let x = tf.layers.globalAveragePooling2d({ name: 'head_gap' }).apply(features) as tf.SymbolicTensor;
  x = tf.layers.dropout({ name: 'head_dropout', rate: config.dropout }).apply(x) as tf.SymbolicTensor;
  x = tf.layers
    .dense({ name: 'head_dense', units: config.denseUnits, activation: 'relu' })
    .apply(x) as tf.SymbolicTensor;
  const output = tf.layers
    .dense({ name: 'head_softmax', units: NUM_CLASSES, activation: 'softmax' })
    .apply(x) as tf.SymbolicTensor;

  const model = tf.model({ inputs: input, outputs: output });
  model.compile({
    optimizer: tf.train.adam(),
    loss: 'categoricalCrossentropy',
    metrics: ['accuracy'],
  });
  return model;
}

/** True when no backbone weight participates in training. */
export function backboneIsFrozen(model: tf.LayersModel): boolean {
  return model.trainableWeights.every((w) => w.name.includes('head_'));
}
