"""Energy-aware waste-sorting cell simulator and bin-assignment optimizer."""

__version__ = "0.1.0"

from .classify import (
    PredictionRecord,
    StochasticClassifier,
    load_predictions,
    sample_prediction,
    save_predictions,
    synthesize_stream,
)
from .errors import SchemaError, SortcellError
from .layout import (
    CATEGORIES,
    BinLayout,
    Point,
    WasteCategory,
    default_layout,
    load_layout,
    save_layout,
)
from .metrics import (
    ClassMetrics,
    ConfusionMatrix,
    TrainingHistory,
    accuracy_gap,
    build_confusion,
    class_metrics,
    load_history,
    overall_accuracy,
)
from .motion import (
    EnergyModel,
    MovementPolicy,
    Path,
    energy_cost,
    euclidean_distance,
    path_length,
    plan_path,
    savings_ratio,
)
from .optimize import (
    AssignmentSolution,
    FrequencyDistribution,
    SlotSet,
    expected_energy,
    optimize_assignment_exact,
    optimize_assignment_hungarian,
)
from .render import render_history_plot, render_trajectory
from .simulate import (
    SimulationReport,
    SortEvent,
    compare_policies,
    run_simulation,
)

__all__ = [
    "__version__",
    "AssignmentSolution",
    "BinLayout",
    "CATEGORIES",
    "ClassMetrics",
    "ConfusionMatrix",
    "EnergyModel",
    "FrequencyDistribution",
    "MovementPolicy",
    "Path",
    "Point",
    "PredictionRecord",
    "SchemaError",
    "SimulationReport",
    "SlotSet",
    "SortEvent",
    "SortcellError",
    "StochasticClassifier",
    "TrainingHistory",
    "WasteCategory",
    "accuracy_gap",
    "build_confusion",
    "class_metrics",
    "compare_policies",
    "default_layout",
    "energy_cost",
    "euclidean_distance",
    "expected_energy",
    "load_history",
    "load_layout",
    "load_predictions",
    "optimize_assignment_exact",
    "optimize_assignment_hungarian",
    "overall_accuracy",
    "path_length",
    "plan_path",
    "render_history_plot",
    "render_trajectory",
    "run_simulation",
    "sample_prediction",
    "save_layout",
    "save_predictions",
    "savings_ratio",
    "synthesize_stream",
]
