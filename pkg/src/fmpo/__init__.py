"""Z2-graded tensor networks: fermionic MPOs, fusion calculus, group
supercohomology and string-net tensors."""

from .graded import (
    GradedSpace,
    GradedTensor,
    HomogeneityError,
    contract,
    fuse_spaces,
    identity_matrix,
    parity_matrix,
    permute_legs,
    random_homogeneous,
    supertrace,
    tensor_product,
)

__version__ = "0.1.0"
