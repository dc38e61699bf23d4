"""Finite quotients of uniserial p-adic space groups with cyclic point
group: exact lattice filtrations, concrete group models, minimal free
resolutions over F_p[G] with their Betti numbers, and the cochain-level
product identities, all verified by exact arithmetic."""

from .errors import BudgetError
from .intmat import IntMatrix, charpoly, hnf, is_prime, snf, xgcd
from .lattice import (
    Lattice,
    apply_matrix,
    lattice_contains,
    lattice_from_columns,
    lattice_index,
    scale_lattice,
)
from .fpmat import FpMatrix, fp_kernel, fp_rank, fp_solve
from .spacegroup import (
    CyclicAction,
    FiltrationLattice,
    FiniteGroup,
    QuotientCoords,
    SpaceGroupParams,
    WreathElement,
    b3r,
    check_delta_equivariance,
    commutator_matrix,
    companion_cyclotomic,
    cyclotomic_pp,
    embed_cyclic,
    filtration,
    filtration_lattices,
    maximal_class_matrix,
    odometer_permutation,
    quotient_group,
    sylow_tree_generators,
    verify_filtration,
    wreath_act,
    wreath_action_matrix,
    wreath_group,
    wreath_inv,
    wreath_mul,
)
from .groups import (
    ElementTable,
    abelian_group,
    element_order,
    enumerate_group,
    frattini_rank,
    order_census,
    subgroup_closure,
)
from .resolution import (
    GroupAlgebraContext,
    Resolution,
    bar_cohomology_dim,
    betti_numbers,
    clear_cache,
    list_cache,
    load_resolution,
    minimal_resolution,
    resolution_cache_key,
    save_resolution,
    verify_theorem,
)
from .cochain import (
    Cochain,
    ElementaryTensor,
    ExteriorAlgebra,
    act_on_cochain,
    act_on_point,
    check_eta_equivariance,
    check_inflation_equivariance,
    cross_product_eval,
    exterior_dims,
    inflate_eval,
    point_index,
    index_point,
)

__version__ = "0.1.0"
