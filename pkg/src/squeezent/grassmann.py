"""Exact exterior (Grassmann) algebra and Grassmann-coefficient fermion operators.

A :class:`GrassmannElement` is a map from canonical monomials (strictly
increasing tuples of generator indices) to complex coefficients.  The order
of the :class:`GeneratorSet` fixes every sign.

A :class:`SuperOperator` is a finite sum ``sum_m m * A_m`` of a Grassmann
monomial ``m`` written to the *left* of a complex matrix ``A_m`` acting on a
one- or two-mode fermion Fock space.  Matrices carry the Fock grading
(number parity), and moving an odd monomial past an odd matrix costs a sign,
so generators anticommute with ``a`` and ``a_dag``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

import numpy as np

Monomial = tuple


class GrassmannError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generator labels with an involutive conjugation pairing."""

    names: tuple
    partner: tuple

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise GrassmannError(f"duplicate generator labels in {self.names}")
        n = len(self.names)
        if len(self.partner) != n or any(self.partner[self.partner[i]] != i for i in range(n)):
            raise GrassmannError("conjugation pairing must be an involution")

    @classmethod
    def conjugate_pairs(cls, *bases: str) -> "GeneratorSet":
        """``conjugate_pairs("α", "β")`` gives the order ``α, α*, β, β*``."""
        names, partner = [], []
        for i, base in enumerate(bases):
            names += [base, base + "*"]
            partner += [2 * i + 1, 2 * i]
        return cls(tuple(names), tuple(partner))

    def index(self, name) -> int:
        if isinstance(name, int):
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise GrassmannError(f"unknown generator {name!r}") from None

    def __len__(self):
        return len(self.names)

    def gen(self, name) -> "GrassmannElement":
        return GrassmannElement(self, {(self.index(name),): 1.0})

    def scalar(self, c) -> "GrassmannElement":
        return GrassmannElement(self, {(): c})

    def one(self) -> "GrassmannElement":
        return self.scalar(1.0)

    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})


def _merge(m1: Monomial, m2: Monomial):
    """Sign and canonical form of the product of two canonical monomials."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    if set(m1) & set(m2):
        return 0, None
    # every pair (i in m1, j in m2) with i > j is one transposition
    swaps = sum(1 for i in m1 for j in m2 if i > j)
    return (-1 if swaps % 2 else 1), tuple(sorted(m1 + m2))


def _canonical(seq: Iterable[int]):
    """Sign and sorted form of an arbitrary generator word (0 if a repeat)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def _fmt(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return f"{c.real:.12g}"
    if c.real == 0:
        return f"{c.imag:.12g}j"
    return f"({c.real:.12g}{c.imag:+.12g}j)"


class GrassmannElement:
    """Element of the exterior algebra over a :class:`GeneratorSet`."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens: GeneratorSet, terms: Mapping[Monomial, complex] | None = None):
        self.gens = gens
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if list(mono) != sorted(set(mono)):
                raise GrassmannError(f"monomial {mono} is not canonical")
            if c != 0:
                clean[mono] = complex(c)
        self.terms = clean

    # -- algebra -----------------------------------------------------------
    def _check(self, other: "GrassmannElement"):
        if other.gens != self.gens:
            raise GrassmannError("elements live over different generator sets")

    def _coerce(self, other):
        if isinstance(other, GrassmannElement):
            self._check(other)
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return self.gens.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GrassmannElement(self.gens, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.gens, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return GrassmannElement(self.gens, {m: c * other for m, c in self.terms.items()})
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return g_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __truediv__(self, c):
        return self * (1 / c)

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = self.gens.scalar(other)
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    __hash__ = None

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def scalar_part(self) -> complex:
        return self.terms.get((), 0j)

    def soul(self) -> "GrassmannElement":
        return GrassmannElement(self.gens, {m: c for m, c in self.terms.items() if m})

    def is_scalar(self) -> bool:
        return all(not m for m in self.terms)

    @property
    def parity(self):
        """0 or 1 for homogeneous elements, ``None`` for mixed ones."""
        ps = {len(m) % 2 for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def graded_part(self, parity: int) -> "GrassmannElement":
        return GrassmannElement(self.gens, {m: c for m, c in self.terms.items()
                                            if len(m) % 2 == parity})

    def coefficient(self, *names) -> complex:
        """Coefficient of the word ``names`` (signed if the word is not canonical)."""
        sign, mono = _canonical(self.gens.index(n) for n in names)
        return 0j if not sign else sign * self.terms.get(mono, 0j)

    def conjugate(self) -> "GrassmannElement":
        return g_conjugate(self)

    def max_abs_diff(self, other: "GrassmannElement") -> float:
        d = (self - other).terms
        return max((abs(c) for c in d.values()), default=0.0)

    def exp(self, max_order: int | None = None) -> "GrassmannElement":
        """``exp(x)`` with an exact finite series for the nilpotent soul."""
        body, soul = self.scalar_part, self.soul()
        total, term = self.gens.one(), self.gens.one()
        for k in range(1, (max_order or len(self.gens)) + 2):
            term = term * soul / k
            if term.is_zero():
                break
            total = total + term
        else:
            raise GrassmannError("soul not nilpotent within max_order")
        return total * complex(np.exp(body)) if body else total

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            word = " ".join(self.gens.names[i] for i in mono)
            c = _fmt(self.terms[mono])
            parts.append(c if not mono else (word if c == "1" else f"-{word}" if c == "-1"
                                             else f"{c} {word}"))
        return " + ".join(parts).replace("+ -", "- ")

    __str__ = render

    def __repr__(self):
        return f"GrassmannElement({self.render()})"


def g_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    """Product with the Koszul sign of sorting the concatenated monomial."""
    x._check(y)
    out: dict = {}
    for (m1, c1), (m2, c2) in product(x.terms.items(), y.terms.items()):
        sign, mono = _merge(m1, m2)
        if sign:
            out[mono] = out.get(mono, 0) + sign * c1 * c2
    return GrassmannElement(x.gens, out)


def _conj_monomial(gens: GeneratorSet, mono: Monomial):
    """Reverse the word and swap every generator with its partner."""
    return _canonical(gens.partner[i] for i in reversed(mono))


def g_conjugate(x: GrassmannElement) -> GrassmannElement:
    """Antilinear involution reversing factor order: ``(xy)* = y* x*``."""
    out = {}
    for mono, c in x.terms.items():
        sign, cm = _conj_monomial(x.gens, mono)
        out[cm] = out.get(cm, 0) + sign * np.conj(c)
    return GrassmannElement(x.gens, out)


def berezin_integrate(x: GrassmannElement, var) -> GrassmannElement:
    """``int d(var) x``: move ``var`` to the front of each monomial and strip it.

    ``int dα 1 = 0`` and ``int dα α = 1``; iterated integrals read right to
    left, ``int dα* dα f = berezin_integrate(berezin_integrate(f, α), α*)``.
    """
    k = x.gens.index(var)
    out = {}
    for mono, c in x.terms.items():
        if k not in mono:
            continue
        pos = mono.index(k)
        rest = mono[:pos] + mono[pos + 1:]
        out[rest] = out.get(rest, 0) + (-c if pos % 2 else c)
    return GrassmannElement(x.gens, out)


def berezin_multiple(x: GrassmannElement, *vars_) -> GrassmannElement:
    """``int d v1 d v2 ... d vk x`` (the right-most differential acts first)."""
    for v in reversed(vars_):
        x = berezin_integrate(x, v)
    return x


# --------------------------------------------------------------------------
# Grassmann-coefficient operators on the fermion Fock space
# --------------------------------------------------------------------------

def fock_parity(modes: int) -> np.ndarray:
    """Number parity of the basis; two modes use index ``2 n_a + n_b``."""
    if modes == 1:
        return np.array([0, 1])
    if modes == 2:
        return np.array([0, 1, 1, 0])
    raise GrassmannError("only one or two fermion modes are supported")


def _twist(mat: np.ndarray, zdiag: np.ndarray) -> np.ndarray:
    """``Z A Z``: flips the sign of the Fock-odd part of ``A``."""
    return zdiag[:, None] * mat * zdiag[None, :]


class SuperOperator:
    """``sum_m m * A_m`` with Grassmann monomials ``m`` left of Fock matrices ``A_m``."""

    __slots__ = ("gens", "modes", "terms")

    def __init__(self, gens: GeneratorSet, modes: int,
                 terms: Mapping[Monomial, np.ndarray] | None = None):
        self.gens = gens
        self.modes = modes
        dim = 2 ** modes
        clean = {}
        for mono, mat in (terms or {}).items():
            mat = np.asarray(mat, dtype=complex)
            if mat.shape != (dim, dim):
                raise GrassmannError(f"matrix shape {mat.shape} does not match {modes} mode(s)")
            if np.any(mat != 0):
                clean[tuple(mono)] = mat
        self.terms = clean

    @property
    def fock_dim(self) -> int:
        return 2 ** self.modes

    @property
    def _z(self) -> np.ndarray:
        return 1.0 - 2.0 * fock_parity(self.modes)

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_matrix(cls, gens, mat, modes: int | None = None) -> "SuperOperator":
        mat = np.asarray(mat, dtype=complex)
        modes = modes or int(round(math.log2(mat.shape[0])))
        return cls(gens, modes, {(): mat})

    @classmethod
    def identity(cls, gens, modes: int = 1) -> "SuperOperator":
        return cls(gens, modes, {(): np.eye(2 ** modes)})

    @classmethod
    def grassmann(cls, x: GrassmannElement, modes: int = 1) -> "SuperOperator":
        """``x`` times the Fock identity."""
        eye = np.eye(2 ** modes)
        return cls(x.gens, modes, {m: c * eye for m, c in x.terms.items()})

    # -- algebra -----------------------------------------------------------
    def _check(self, other: "SuperOperator"):
        if other.gens != self.gens or other.modes != self.modes:
            raise GrassmannError("operators act on different spaces")

    def _coerce(self, other):
        if isinstance(other, SuperOperator):
            self._check(other)
            return other
        if isinstance(other, GrassmannElement):
            return SuperOperator.grassmann(other, self.modes)
        if isinstance(other, (int, float, complex, np.number)):
            return SuperOperator(self.gens, self.modes, {(): other * np.eye(self.fock_dim)})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {m: a.copy() for m, a in self.terms.items()}
        for m, b in other.terms.items():
            out[m] = out[m] + b if m in out else b
        return SuperOperator(self.gens, self.modes, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperOperator(self.gens, self.modes, {m: -a for m, a in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return SuperOperator(self.gens, self.modes, {m: a * other for m, a in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return super_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return super_mul(other, self)

    __matmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / c)

    def __eq__(self, other):
        if not isinstance(other, SuperOperator):
            return NotImplemented
        if other.gens != self.gens or other.modes != self.modes:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(np.array_equal(a, other.terms[m]) for m, a in self.terms.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs_diff(self, other: "SuperOperator") -> float:
        d = (self - other).terms
        return max((float(np.max(np.abs(a))) for a in d.values()), default=0.0)

    @property
    def dagger(self) -> "SuperOperator":
        return super_dagger(self)

    def is_grassmann_free(self) -> bool:
        return all(not m for m in self.terms)

    def numeric(self) -> np.ndarray:
        """The plain matrix of a Grassmann-free operator."""
        if not self.is_grassmann_free():
            raise GrassmannError("operator has Grassmann-valued entries")
        return self.terms.get((), np.zeros((self.fock_dim, self.fock_dim), dtype=complex))

    # -- matrix views ------------------------------------------------------
    def entry(self, m: int, n: int) -> GrassmannElement:
        """Grassmann coefficient of ``|m><n|`` (coefficient written on the left)."""
        return GrassmannElement(self.gens, {mono: a[m, n] for mono, a in self.terms.items()})

    def sandwich(self, m: int, n: int) -> GrassmannElement:
        """Graded matrix element ``<m| X |n>``: the bra passes the coefficient."""
        par = fock_parity(self.modes)[m]
        return GrassmannElement(self.gens, {mono: a[m, n] * (-1) ** (par * len(mono))
                                            for mono, a in self.terms.items()})

    def matrix(self, graded: bool = False) -> list[list[GrassmannElement]]:
        get = self.sandwich if graded else self.entry
        return [[get(m, n) for n in range(self.fock_dim)] for m in range(self.fock_dim)]

    def render(self) -> str:
        rows = self.matrix()
        width = max(len(str(e)) for r in rows for e in r)
        return "\n".join("[ " + " | ".join(str(e).ljust(width) for e in r) + " ]" for r in rows)

    def __repr__(self):
        return f"SuperOperator(modes={self.modes},\n{self.render()})"


def super_mul(x: SuperOperator, y: SuperOperator) -> SuperOperator:
    """``(m A)(n B) = (-1)^{|n||A|} (m n) (A B)``, odd parts of ``A`` split off.

    Moving ``n`` left through ``A`` leaves the even part of ``A`` unchanged and
    flips the odd part, i.e. ``A n = n (Z A Z)`` for odd ``n``.
    """
    x._check(y)
    z = x._z
    out: dict = {}
    for (m1, a), (m2, b) in product(x.terms.items(), y.terms.items()):
        sign, mono = _merge(m1, m2)
        if not sign:
            continue
        left = _twist(a, z) if len(m2) % 2 else a
        prod_ = sign * (left @ b)
        out[mono] = out[mono] + prod_ if mono in out else prod_
    return SuperOperator(x.gens, x.modes, out)


def super_dagger(x: SuperOperator) -> SuperOperator:
    """``(m A)^dag = A^dag m* = m* (Z^{|m|} A^dag Z^{|m|})``; reverses all products."""
    z = x._z
    out: dict = {}
    for mono, a in x.terms.items():
        sign, cm = _conj_monomial(x.gens, mono)
        ad = a.conj().T
        mat = sign * (_twist(ad, z) if len(mono) % 2 else ad)
        out[cm] = out[cm] + mat if cm in out else mat
    return SuperOperator(x.gens, x.modes, out)


def super_trace(x: SuperOperator) -> GrassmannElement:
    """Plain trace over the Fock factor: ``sum_n`` of the diagonal coefficients."""
    return GrassmannElement(x.gens, {m: np.trace(a) for m, a in x.terms.items()})


def super_exp_nilpotent(x: SuperOperator, max_order: int = 16) -> SuperOperator:
    """``sum_j x^j / j!``, exact once ``x^k`` vanishes identically."""
    total = SuperOperator.identity(x.gens, x.modes)
    term = total
    for j in range(1, max_order + 1):
        term = super_mul(term, x) / j
        if term.is_zero():
            return total
        total = total + term
    raise GrassmannError(f"operator not nilpotent within order {max_order}")


def fermion_ladders(gens: GeneratorSet, modes: int = 1):
    """Annihilators as SuperOperators: ``a`` (one mode) or ``(a, b)`` (two modes).

    Two-mode basis ``|n_a n_b> = (a_dag)^n_a (b_dag)^n_b |0>`` at index
    ``2 n_a + n_b``; ``b`` carries the Jordan-Wigner string of mode ``a``.
    """
    lower = np.array([[0, 1], [0, 0]], dtype=complex)
    if modes == 1:
        return SuperOperator(gens, 1, {(): lower})
    z = np.diag([1.0, -1.0])
    a = np.kron(lower, np.eye(2))
    b = np.kron(z, lower)
    return SuperOperator(gens, 2, {(): a}), SuperOperator(gens, 2, {(): b})


def basis_ket(gens: GeneratorSet, n: int, modes: int = 1) -> SuperOperator:
    """``|n><0|``: kets are encoded as operators supported on the vacuum column."""
    dim = 2 ** modes
    mat = np.zeros((dim, dim), dtype=complex)
    mat[n, 0] = 1.0
    return SuperOperator(gens, modes, {(): mat})
