import * as fs from 'node:fs';
import * as path from 'node:path';
import * as tf from '@tensorflow/tfjs';

import { CATEGORIES, HISTORY_HEADER, PREDICTIONS_HEADER, argmaxIndex } from './categories.js';
import { DatasetItem, loadBatch, scanDataset, splitDataset } from './dataset.js';
import { DEFAULT_MODEL_CONFIG, ModelConfig, buildModel } from './model.js';

export interface TrainerConfig extends ModelConfig {
  dataRoot: string;
  outDir: string;
  epochs: number;
  batchSize: number;
  valFraction: number;
  /** Controls dataset split membership (and nothing else). */
  seed: number;
}

export const DEFAULT_TRAINER_CONFIG: Omit<TrainerConfig, 'dataRoot' | 'outDir'> = {
  ...DEFAULT_MODEL_CONFIG,
  epochs: 30,
  batchSize: 32,
  valFraction: 0.2,
  seed: 1,
};

export interface TrainResult {
  historyPath: string;
  predictionsPath: string;
  modelDir: string;
  runMetadataPath: string;
  finalTrainAccuracy: number;
  finalValAccuracy: number;
}

function toPercent(v: number): string {
  return (v * 100).toFixed(6);
}

function writeHistoryCsv(outPath: string, trainAcc: number[], valAcc: number[]): void {
  const lines = [HISTORY_HEADER];
  for (let e = 0; e < trainAcc.length; e++) {
    lines.push(`${e + 1},${toPercent(trainAcc[e])},${toPercent(valAcc[e])}`);
  }
  fs.writeFileSync(outPath, lines.join('\n') + '\n', 'utf8');
}

function writePredictionsCsv(outPath: string, items: DatasetItem[], probabilities: number[][]): void {
  const lines = [PREDICTIONS_HEADER];
  items.forEach((item, i) => {
    const row = probabilities[i];
    const pred = CATEGORIES[argmaxIndex(row)];
    lines.push(
      `${item.id},${item.label},${pred},` + row.map((p) => p.toFixed(9)).join(','),
    );
  });
  fs.writeFileSync(outPath, lines.join('\n') + '\n', 'utf8');
}

async function saveModel(model: tf.LayersModel, modelDir: string): Promise<void> {
  fs.mkdirSync(modelDir, { recursive: true });
  await model.save(
    tf.io.withSaveHandler(async (artifacts) => {
      const weightData = artifacts.weightData;
      const buffers = Array.isArray(weightData)
        ? weightData.map((b) => Buffer.from(b))
        : [Buffer.from(weightData as ArrayBuffer)];
      fs.writeFileSync(path.join(modelDir, 'weights.bin'), Buffer.concat(buffers));
      fs.writeFileSync(
        path.join(modelDir, 'model.json'),
        JSON.stringify(
          {
            modelTopology: artifacts.modelTopology,
            format: artifacts.format,
            generatedBy: artifacts.generatedBy,
            convertedBy: artifacts.convertedBy ?? null,
            weightsManifest: [{ paths: ['weights.bin'], weights: artifacts.weightSpecs }],
          },
          null,
          2,
        ),
      );
      return { modelArtifactsInfo: { dateSaved: new Date(), modelTopologyType: 'JSON' } };
    }),
  );
}

/** Train the classifier and export everything the sorting simulator ingests:
 * history.csv (per-epoch accuracies in percent), predictions.csv over the
 * validation split, the saved model, and a run.json metadata record. */
export async function trainAndExport(config: TrainerConfig): Promise<TrainResult> {
  const items = scanDataset(config.dataRoot);
  const { train, validation } = splitDataset(items, config.valFraction, config.seed);
  if (train.length === 0 || validation.length === 0) {
    throw new RangeError(
      `split produced ${train.length} train / ${validation.length} validation items; need both non-empty`,
    );
  }

  const trainBatch = loadBatch(train, config.imageSize);
  const valBatch = loadBatch(validation, config.imageSize);
  const xs = tf.tensor4d(trainBatch.pixels, [train.length, config.imageSize, config.imageSize, 3]);
  const ys = tf.tensor2d(trainBatch.labels, [train.length, CATEGORIES.length]);
  const xVal = tf.tensor4d(valBatch.pixels, [validation.length, config.imageSize, config.imageSize, 3]);
  const yVal = tf.tensor2d(valBatch.labels, [validation.length, CATEGORIES.length]);

  const model = await buildModel(config);
  const history = await model.fit(xs, ys, {
    epochs: config.epochs,
    batchSize: config.batchSize,
    validationData: [xVal, yVal],
    verbose: 0,
  });

  const trainAcc = (history.history['acc'] ?? history.history['accuracy']) as number[];
  const valAcc = (history.history['val_acc'] ?? history.history['val_accuracy']) as number[];
  const losses = history.history['loss'] as number[];
  if (losses.some((l) => !Number.isFinite(l))) {
    throw new Error(`training diverged: loss history ${losses.join(', ')}`);
  }

  fs.mkdirSync(config.outDir, { recursive: true });
  const historyPath = path.join(config.outDir, 'history.csv');
  writeHistoryCsv(historyPath, trainAcc, valAcc);

  const predictionsPath = path.join(config.outDir, 'predictions.csv');
  const probabilities = (await (model.predict(xVal) as tf.Tensor).array()) as number[][];
  writePredictionsCsv(predictionsPath, validation, probabilities);

  const modelDir = path.join(config.outDir, 'model');
  await saveModel(model, modelDir);

  const runMetadataPath = path.join(config.outDir, 'run.json');
  const { dataRoot, outDir, ...settings } = config;
  fs.writeFileSync(
    runMetadataPath,
    JSON.stringify(
      {
        settings,
        data_root: dataRoot,
        class_counts: Object.fromEntries(
          CATEGORIES.map((c) => [c, items.filter((it) => it.label === c).length]),
        ),
        train_items: train.length,
        validation_items: validation.length,
        final_train_accuracy_percent: trainAcc[trainAcc.length - 1] * 100,
        final_val_accuracy_percent: valAcc[valAcc.length - 1] * 100,
      },
      null,
      2,
    ) + '\n',
  );

  tf.dispose([xs, ys, xVal, yVal]);
  return {
    historyPath,
    predictionsPath,
    modelDir,
    runMetadataPath,
    finalTrainAccuracy: trainAcc[trainAcc.length - 1] * 100,
    finalValAccuracy: valAcc[valAcc.length - 1] * 100,
  };
}
