from .group import (DEFAULT_ELEMENT_CAP, CosetAction, PermGroup, StabChain, contains, coset_action,
                    elements, group_from_elements, group_order, subgroup_intersection)
from .perm import Permutation, as_array, compose
from .presentation import DEFAULT_COSET_CAP, CosetTable, Presentation, todd_coxeter

__all__ = [
    "DEFAULT_COSET_CAP", "DEFAULT_ELEMENT_CAP", "CosetAction", "CosetTable", "PermGroup",
    "Permutation", "Presentation", "StabChain", "as_array", "compose", "contains",
    "coset_action", "elements", "group_from_elements", "group_order", "subgroup_intersection",
    "todd_coxeter",
]
