"""Hypercube boundaries, compressions and disjoint-path counts."""

from .boundary import (
    EdgeSet,
    directed_edge_boundary,
    directed_vertex_boundary,
    edge_between,
    edge_boundary,
    lower_shadow,
    surface,
    up_closure_h,
    vertex_boundary,
)
from .bounds import (
    LevelDecomposition,
    bl_edge_bound,
    bl_vertex_bound,
    fractional_binomial,
    func_b,
    func_e,
    func_s,
    level_decompose,
    solve_kk_threshold,
)
from .compression import (
    CompressionStep,
    compress_C,
    compress_D,
    compress_to_down_set,
    compression_gap,
)
from .cube import (
    CubeSet,
    CubeVertex,
    SectionDecomposition,
    compare_binary,
    compare_simplicial,
    initial_segment,
    is_down_set,
    is_i_down,
    is_up_set,
    make_cube_set,
    sections,
)
from .flownet import (
    CutWitness,
    FlowNetwork,
    PathFamily,
    edge_disjoint_paths,
    max_flow,
    max_matching_to_complement,
    min_boundary_oracle,
    vertex_disjoint_paths,
)

__version__ = "0.1.0"
