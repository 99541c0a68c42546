"""q-characters of minimal affinizations of type C_n, their M-systems and the
cluster algebras whose exchange relations realise them."""

from .affinization import (
    CharacterEngine,
    EquationInstance,
    ModuleLabel,
    dual_equation,
    highest_weight,
    make_equation,
    verify_equation,
)
from .cartan import CartanData, build_cartan, build_type_c
from .laurent import LaurentPoly
from .monomial import Monomial
from .qchar import QCharacter, TruncationRegion, compute_character, frenkel_mukhin

__all__ = [
    "CartanData",
    "CharacterEngine",
    "EquationInstance",
    "LaurentPoly",
    "ModuleLabel",
    "Monomial",
    "QCharacter",
    "TruncationRegion",
    "build_cartan",
    "build_type_c",
    "compute_character",
    "dual_equation",
    "frenkel_mukhin",
    "highest_weight",
    "make_equation",
    "verify_equation",
]
