"""Small worked instances used by the tests, the golden files and the README."""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from .finbool import BooleanAlgebra, BooleanHom
from .plonka import DirectSystem, validate_system
from .semilattice import chain, from_order

F = Fraction


def diamond_system() -> DirectSystem:
    """Diamond index ``i0 < i, j < k`` with components of 1, 2, 2 and 3 atoms.

    ``p_ik`` sends ``a`` to ``c`` and ``p_jk`` sends ``b`` to ``e``; every hom
    out of ``i0`` is the unique one.
    """
    L = from_order(4, [(0, 1), (0, 2), (1, 3), (2, 3)], ["i0", "i", "j", "k"])
    A0 = BooleanAlgebra(1)
    Ai = BooleanAlgebra(2, ("a", "a'"))
    Aj = BooleanAlgebra(2, ("b", "b'"))
    Ak = BooleanAlgebra(3, ("c", "d", "e"))
    homs = {
        (0, 1): BooleanHom(A0, Ai, (0, 0)),
        (0, 2): BooleanHom(A0, Aj, (0, 0)),
        (0, 3): BooleanHom(A0, Ak, (0, 0, 0)),
        (1, 3): BooleanHom(Ai, Ak, (0, 1, 1)),   # c<-a, d<-a', e<-a'
        (2, 3): BooleanHom(Aj, Ak, (1, 1, 0)),   # c<-b', d<-b', e<-b
    }
    return validate_system(L, [A0, Ai, Aj, Ak], homs)


def two_chain_system() -> DirectSystem:
    """Chain ``i0 < j``: the 4-element algebra on ``a, a'`` collapsing onto ``{b', b}``."""
    L = chain(2, ["i0", "j"])
    A0 = BooleanAlgebra(2, ("a", "a'"))
    Aj = BooleanAlgebra(1, ("b",))
    return validate_system(L, [A0, Aj], {(0, 1): BooleanHom(A0, Aj, (0,))})


DIAMOND_STATE_WEIGHTS = {
    "i0": (F(1),),
    "i": (F(1, 2), F(1, 2)),
    "j": (F(1, 3), F(2, 3)),
    "k": (F(1, 2), F(1, 6), F(1, 3)),
}

# value of the reference state on every element of the diamond sum
DIAMOND_STATE_VALUES = {
    "1": F(1), "1_i": F(1), "1_j": F(1), "1_k": F(1),
    "0": F(0), "0_i": F(0), "0_j": F(0), "0_k": F(0),
    "a": F(1, 2), "a'": F(1, 2),
    "b": F(1, 3), "b'": F(2, 3),
    "c": F(1, 2), "c'": F(1, 2), "d": F(1, 6), "e": F(1, 3), "d'": F(5, 6), "e'": F(2, 3),
}


def golden_path(name: str):
    return resources.files("ibsl") / "golden" / name


def golden_text(name: str) -> str:
    return golden_path(name).read_text(encoding="utf-8")


GOLDEN_FILES = ("ex14.system", "ex22.system", "ex22.raw", "ex34.state",
                "ex34_components.state", "uniform.measure")
