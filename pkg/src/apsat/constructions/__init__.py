from .cyclic_sets import (
    base4_decode,
    base4_encode,
    base4_layers,
    difference_counts,
    digit_pair,
    gyok3_case,
    gyok3_set,
    layer_H,
    layer_K,
    mrose,
    mrose_blocks,
    mrose_reach,
    random_bound,
    random_saturating,
    singer,
)
from .planar import (
    Variant,
    axes_product,
    lines_construction,
    lines_size,
    minus_two_orbits,
    orbit_avoider,
    parabola,
)
from .records import ConstructionError, ConstructionRecord, HypothesisError
from .transfer import (
    ProductMode,
    affine_transform,
    cartesian,
    iterate_compose,
    product_compose,
    product_space,
    subgroup_compose,
)
