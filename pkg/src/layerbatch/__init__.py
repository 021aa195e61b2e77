"""Layer-aware net batching for parallel global routing."""

__version__ = "0.1.0"

from .batcher import (
    assign_batches,
    chunk_size,
    extract_features,
    fallback_assign,
    infer,
)
from .evaluator import EvaluationResult, conflict_detected, evaluate_batches
from .model import GeneratorModel, Layer, load_model, save_model
from .netlist import (
    GridDims,
    Net,
    Netlist,
    Orientation,
    Pin,
    Segment,
    build_rsmt,
    generate_synthetic,
    parse_netlist,
    serialize_netlist,
)
from .occupancy import (
    OccupancyMap,
    Representation,
    linearize,
    select_representation,
)
from .overlap import (
    ConflictGraph,
    build_conflict_graph,
    conflict_bbox,
    conflict_layer_agnostic,
    conflict_layer_aware,
)
from .pipeline import (
    PipelineConfig,
    PipelineStats,
    compare_strategies,
    run_pipeline,
    validate_result,
)
from .reallocator import (
    BatchingResult,
    consolidate,
    exhaustive_new_batches,
    reallocate,
)
