"""Class groups: binary quadratic forms for imaginary quadratic fields and
the relation method for general fields."""

from .abelian import AbelianGroupSNF, group_from_relations, subgroup_order, sylow_p
from .general import (
    ClassGroupInconclusive,
    d_order_by_principality,
    d_subgroup_order,
    general_class_group,
    ideal_class_order,
)
from .quadratic import quad_class_group

__all__ = [
    "AbelianGroupSNF",
    "ClassGroupInconclusive",
    "d_order_by_principality",
    "d_subgroup_order",
    "general_class_group",
    "group_from_relations",
    "ideal_class_order",
    "quad_class_group",
    "subgroup_order",
    "sylow_p",
]
