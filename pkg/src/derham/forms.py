"""Piecewise polynomial differential forms in barycentric coordinates.

A :class:`PolyForm` stores, for every maximal simplex ``T = [u0 < u1 < ... < un]``
of a complex, a polynomial k-form in the barycentric coordinates of ``T``.
Terms are kept in a canonical reduced form:

* ``dλ_{u0}`` is eliminated through ``dλ_{u0} = -Σ_{i≥1} dλ_{ui}``;
* ``λ_{u0}`` is eliminated through ``λ_{u0} = 1 - Σ_{i≥1} λ_{ui}``;
* frames are sorted (the permutation sign goes into the coefficient), like
  terms are merged and zero terms dropped.

What remains is a polynomial form in the independent affine coordinates
``λ_{u1}..λ_{un}``, so two forms are equal exactly when their canonical term
dictionaries are equal.

Integration is metric free: a k-form is pulled back to a k-face, rewritten in
that face's own canonical coordinates and integrated monomial by monomial with
the Dirichlet formula ``∫ λ^a dλ_{w1}∧…∧dλ_{wk} = Π a_i! / (k + Σ a_i)!``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Iterable, Mapping, Optional, Sequence

from .cohomology import Cochain
from .complex import Chain, Simplex, SimplicialComplex
from .linalg import as_rational, format_rational

Monomial = tuple[tuple[int, int], ...]  # sorted (vertex, exponent) pairs, exponent > 0
Frame = tuple[int, ...]  # sorted vertex ids of dλ factors
Terms = dict[tuple[Monomial, Frame], Fraction]

ONE: Monomial = ()


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class BarycentricTerm:
    """``coefficient * Π λ_v^{e_v} * dλ_{f1} ∧ … ∧ dλ_{fk}``."""

    coefficient: Fraction
    monomial: Monomial
    frame: Frame

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self.monomial)


# -- local algebra on one simplex ----------------------------------------------


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_from(raw) -> Monomial:
    items = raw.items() if isinstance(raw, Mapping) else raw
    exps: dict[int, int] = {}
    for v, e in items:
        v, e = int(v), int(e)
        if e < 0:
            raise FormError(f"negative exponent {e} on λ_{v}")
        if e:
            exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _sort_frame(frame: Sequence[int]) -> Optional[tuple[int, Frame]]:
    """Sorted frame and permutation sign, or None for a repeated factor."""
    frame = list(frame)
    if len(set(frame)) != len(frame):
        return None
    inversions = sum(1 for i in range(len(frame)) for j in range(i + 1, len(frame)) if frame[i] > frame[j])
    return (-1) ** inversions, tuple(sorted(frame))


def _prepend(v: int, frame: Frame) -> Optional[tuple[int, Frame]]:
    """``dλ_v ∧ dλ_frame`` as ``sign * dλ_sorted``."""
    if v in frame:
        return None
    smaller = sum(1 for u in frame if u < v)
    return (-1) ** smaller, tuple(sorted(frame + (v,)))


def _concat(f1: Frame, f2: Frame) -> Optional[tuple[int, Frame]]:
    if set(f1) & set(f2):
        return None
    inversions = sum(1 for x in f1 for y in f2 if x > y)
    return (-1) ** inversions, tuple(sorted(f1 + f2))


@lru_cache(maxsize=1024)
def _one_minus_sum_power(others: tuple[int, ...], a: int) -> tuple[tuple[Monomial, Fraction], ...]:
    """Expansion of ``(1 - Σ_{v in others} λ_v)^a``."""
    poly: dict[Monomial, Fraction] = {ONE: Fraction(1)}
    factor = {ONE: Fraction(1)}
    for v in others:
        factor[((v, 1),)] = Fraction(-1)
    for _ in range(a):
        nxt: dict[Monomial, Fraction] = {}
        for m1, c1 in poly.items():
            for m2, c2 in factor.items():
                m = _mono_mul(m1, m2)
                nxt[m] = nxt.get(m, 0) + c1 * c2
        poly = {m: c for m, c in nxt.items() if c}
    return tuple(sorted(poly.items()))


def _add_term(out: Terms, mono: Monomial, frame: Frame, coeff: Fraction) -> None:
    key = (mono, frame)
    new = out.get(key, 0) + coeff
    if new:
        out[key] = new
    else:
        out.pop(key, None)


def canonicalize(raw: Iterable[tuple[object, object, Sequence[int]]], vertices: Sequence[int]) -> Terms:
    """Reduce ``(coefficient, monomial, frame)`` triples to canonical terms on a simplex.

    ``monomial`` may be a mapping or a sequence of ``(vertex, exponent)``
    pairs; every vertex mentioned must belong to ``vertices``.
    """
    vertices = tuple(vertices)
    vset = set(vertices)
    u0, rest = vertices[0], vertices[1:]
    out: Terms = {}
    for coeff, mono, frame in raw:
        coeff = as_rational(coeff)
        if not coeff:
            continue
        mono = _mono_from(mono)
        for v, _ in mono:
            if v not in vset:
                raise FormError(f"λ_{v} does not belong to simplex {list(vertices)}")
        for v in frame:
            if v not in vset:
                raise FormError(f"dλ_{v} does not belong to simplex {list(vertices)}")
        sorted_frame = _sort_frame(frame)
        if sorted_frame is None:
            continue
        sign, frame = sorted_frame
        coeff *= sign
        if frame and frame[0] == u0:
            frames = []
            for v in rest:
                hit = _prepend(v, frame[1:])
                if hit is not None:
                    frames.append((-hit[0], hit[1]))
        else:
            frames = [(1, frame)]
        exps = dict(mono)
        a0 = exps.pop(u0, 0)
        base = tuple(sorted(exps.items()))
        polys = _one_minus_sum_power(rest, a0) if a0 else ((ONE, Fraction(1)),)
        for pm, pc in polys:
            m = _mono_mul(base, pm)
            for fs, fr in frames:
                _add_term(out, m, fr, coeff * pc * fs)
    return out


def restrict(terms: Terms, face: Sequence[int]) -> Terms:
    """Pull canonical terms back to a face, in the face's canonical coordinates."""
    face = tuple(face)
    fset = set(face)
    kept = []
    for (mono, frame), c in terms.items():
        if all(v in fset for v, _ in mono) and all(v in fset for v in frame):
            kept.append((c, mono, frame))
    return canonicalize(kept, face)


def _d_terms(terms: Terms) -> Terms:
    out: Terms = {}
    for (mono, frame), c in terms.items():
        for idx, (v, e) in enumerate(mono):
            hit = _prepend(v, frame)
            if hit is None:
                continue
            sign, fr = hit
            if e == 1:
                m = mono[:idx] + mono[idx + 1:]
            else:
                m = mono[:idx] + ((v, e - 1),) + mono[idx + 1:]
            _add_term(out, m, fr, c * e * sign)
    return out


def _wedge_terms(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for (m1, f1), c1 in a.items():
        for (m2, f2), c2 in b.items():
            hit = _concat(f1, f2)
            if hit is None:
                continue
            sign, fr = hit
            _add_term(out, _mono_mul(m1, m2), fr, c1 * c2 * sign)
    return out


def dirichlet_integral(exponents: Sequence[int]) -> Fraction:
    """``∫_{Δ^k} λ_0^{a0} … λ_k^{ak} dλ_1 ∧ … ∧ dλ_k`` for the standard k-simplex."""
    k = len(exponents) - 1
    num = 1
    for a in exponents:
        num *= factorial(a)
    return Fraction(num, factorial(k + sum(exponents)))


def _integrate_on_face(terms: Terms, face: Simplex) -> Fraction:
    """Integral of canonical face terms over the face in its increasing orientation."""
    expected = face[1:]
    total = Fraction(0)
    for (mono, frame), c in terms.items():
        if frame != expected:  # pragma: no cover - canonical top-degree terms have this frame
            raise FormError(f"term frame {frame} is not the volume frame of {face}")
        exps = dict(mono)
        total += c * dirichlet_integral([exps.get(v, 0) for v in face])
    return total


# -- global forms ------------------------------------------------------------------


class PolyForm:
    """A polynomial differential form of fixed degree on every maximal simplex."""

    __slots__ = ("complex", "degree", "_terms")

    def __init__(self, K: SimplicialComplex, degree: int, terms: Mapping[Simplex, object] = (), *, canonical: bool = False):
        self.complex = K
        self.degree = degree
        maximal = set(K.maximal_simplices)
        items = terms.items() if isinstance(terms, Mapping) else terms
        stored: dict[Simplex, Terms] = {}
        for top, local in items:
            top = tuple(top)
            if top not in maximal:
                raise FormError(f"{list(top)} is not a maximal simplex of the complex")
            if canonical:
                reduced = {key: c for key, c in local.items() if c}
            else:
                if isinstance(local, Mapping):
                    local = [(c, m, f) for (m, f), c in local.items()]
                reduced = canonicalize(local, top)
            for _, frame in reduced:
                if len(frame) != degree:
                    raise FormError(f"term of degree {len(frame)} in a {degree}-form")
            if reduced:
                stored[top] = reduced
        self._terms = dict(sorted(stored.items()))

    @classmethod
    def zero(cls, K: SimplicialComplex, degree: int) -> "PolyForm":
        return cls(K, degree, {}, canonical=True)

    @classmethod
    def constant(cls, K: SimplicialComplex, value=1) -> "PolyForm":
        value = as_rational(value)
        return cls(K, 0, {top: {(ONE, ()): value} for top in K.maximal_simplices}, canonical=True)

    @classmethod
    def barycentric(cls, K: SimplicialComplex, v: int) -> "PolyForm":
        """The hat function λ_v (zero on simplices not containing v)."""
        terms = {}
        for top in K.maximal_simplices:
            if v in top:
                terms[top] = canonicalize([(1, ((v, 1),), ())], top)
        return cls(K, 0, terms, canonical=True)

    def local_terms(self, top: Sequence[int]) -> Terms:
        """Canonical terms on a maximal simplex (a copy)."""
        return dict(self._terms.get(tuple(top), {}))

    def terms(self, top: Sequence[int]) -> list[BarycentricTerm]:
        return [BarycentricTerm(c, m, f) for (m, f), c in sorted(self._terms.get(tuple(top), {}).items())]

    def support(self) -> tuple[Simplex, ...]:
        return tuple(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def restrict(self, s: Sequence[int], top: Optional[Sequence[int]] = None) -> Terms:
        """Pullback to simplex ``s`` computed from maximal simplex ``top``
        (default: the first maximal simplex containing ``s``)."""
        s = tuple(s)
        if top is None:
            top = self.complex.carriers(s)[0]
        return restrict(self._terms.get(tuple(top), {}), s)

    def continuity_defects(self) -> list[Simplex]:
        """Simplices on which the pullbacks from different maximal simplices disagree."""
        K = self.complex
        bad = []
        for p in range(max(self.degree, 0), K.dim + 1):
            for s in K.simplices(p):
                tops = K.carriers(s)
                if len(tops) < 2:
                    continue
                first = self.restrict(s, tops[0])
                if any(self.restrict(s, t) != first for t in tops[1:]):
                    bad.append(s)
        return bad

    def is_continuous(self) -> bool:
        return not self.continuity_defects()

    def d(self) -> "PolyForm":
        return exterior_derivative(self)

    def wedge(self, other: "PolyForm") -> "PolyForm":
        return wedge(self, other)

    def _check(self, other: "PolyForm") -> None:
        if other.complex is not self.complex:
            raise FormError("forms live on different complexes")
        if other.degree != self.degree:
            raise FormError(f"form degrees differ: {self.degree} vs {other.degree}")

    def _combine(self, other, sign: int) -> "PolyForm":
        if not isinstance(other, PolyForm):
            return NotImplemented
        self._check(other)
        out = {top: dict(t) for top, t in self._terms.items()}
        for top, local in other._terms.items():
            acc = out.setdefault(top, {})
            for (m, f), c in local.items():
                _add_term(acc, m, f, sign * c)
        return PolyForm(self.complex, self.degree, out, canonical=True)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar):
        scalar = as_rational(scalar)
        return PolyForm(
            self.complex,
            self.degree,
            {top: {k: scalar * c for k, c in t.items()} for top, t in self._terms.items()},
            canonical=True,
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.complex is other.complex and self.degree == other.degree and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((id(self.complex), self.degree, tuple((t, tuple(sorted(v.items()))) for t, v in self._terms.items())))

    def __repr__(self) -> str:
        n = sum(len(t) for t in self._terms.values())
        return f"<PolyForm degree={self.degree} terms={n} on {len(self._terms)} simplices>"


def exterior_derivative(form: PolyForm) -> PolyForm:
    """``d`` applied termwise; a form of top degree maps to the zero form one degree up."""
    terms = {top: _d_terms(t) for top, t in form._terms.items()}
    return PolyForm(form.complex, form.degree + 1, terms, canonical=True)


def wedge(alpha: PolyForm, beta: PolyForm) -> PolyForm:
    if alpha.complex is not beta.complex:
        raise FormError("forms live on different complexes")
    terms = {}
    for top, a in alpha._terms.items():
        b = beta._terms.get(top)
        if b:
            terms[top] = _wedge_terms(a, b)
    return PolyForm(alpha.complex, alpha.degree + beta.degree, terms, canonical=True)


@lru_cache(maxsize=4096)
def _whitney_local(top: Simplex, sigma: Simplex) -> tuple[tuple[tuple[Monomial, Frame], Fraction], ...]:
    p = len(sigma) - 1
    scale = factorial(p)
    raw = []
    for j, v in enumerate(sigma):
        raw.append((scale * (-1) ** j, ((v, 1),), sigma[:j] + sigma[j + 1:]))
    return tuple(sorted(canonicalize(raw, top).items()))


def whitney_basis_form(K: SimplicialComplex, sigma: Sequence[int]) -> PolyForm:
    """The Whitney form ``W_σ = p! Σ_j (-1)^j λ_{vj} dλ_{v0} ∧ … ^j … ∧ dλ_{vp}``."""
    sigma = tuple(sigma)
    tops = K.carriers(sigma)
    return PolyForm(K, len(sigma) - 1, {t: dict(_whitney_local(t, sigma)) for t in tops}, canonical=True)


def whitney(f: Cochain) -> PolyForm:
    """Whitney lift ``W(f) = Σ_σ f(σ) W_σ``."""
    K = f.complex
    p = f.dim
    if p < 0:
        return PolyForm.zero(K, p)
    terms: dict[Simplex, Terms] = {}
    index = K.index(p)
    for top in K.maximal_simplices:
        acc: Terms = {}
        for sigma in combinations(top, p + 1):
            value = f.values[index[sigma]]
            if not value:
                continue
            for (m, fr), c in _whitney_local(top, sigma):
                _add_term(acc, m, fr, value * c)
        if acc:
            terms[top] = acc
    return PolyForm(K, p, terms, canonical=True)


def integrate(form: PolyForm, chain: Chain) -> Fraction:
    """Exact integral of a k-form over a k-chain."""
    if form.degree != chain.dim:
        raise FormError(f"cannot integrate a {form.degree}-form over a {chain.dim}-chain")
    K = form.complex
    K.check_chain(chain)
    total = Fraction(0)
    for s, coeff in chain.coefficients.items():
        total += coeff * _integrate_on_face(form.restrict(s), s)
    return total


def derham_map(form: PolyForm) -> Cochain:
    """The cochain ``σ ↦ ∫_σ form`` on every simplex of matching dimension."""
    K = form.complex
    p = form.degree
    values = [_integrate_on_face(form.restrict(s), s) for s in K.simplices(p)]
    return Cochain(K, p, values)


# -- JSON -----------------------------------------------------------------------


def form_to_json(form: PolyForm) -> dict:
    simplices = []
    for top, local in form._terms.items():
        terms = [
            {
                "coefficient": format_rational(c),
                "monomial": {str(v): e for v, e in m},
                "frame": list(f),
            }
            for (m, f), c in sorted(local.items())
        ]
        simplices.append({"simplex": list(top), "terms": terms})
    return {"kind": "polyform", "degree": form.degree, "simplices": simplices}


def form_from_json(K: SimplicialComplex, data, check_continuity: bool = True) -> PolyForm:
    """Parse a form; terms need not be canonical.  Discontinuous forms are rejected."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict) or "degree" not in data or "simplices" not in data:
        raise FormError('a form needs "degree" and "simplices"')
    degree = data["degree"]
    if not isinstance(degree, int) or isinstance(degree, bool):
        raise FormError('"degree" must be an integer')
    terms: dict[Simplex, list] = {}
    for k, entry in enumerate(data["simplices"]):
        try:
            top = tuple(sorted(int(v) for v in entry["simplex"]))
            raw = []
            for t in entry["terms"]:
                mono = {int(v): int(e) for v, e in t.get("monomial", {}).items()}
                raw.append((as_rational(t["coefficient"]), mono, [int(v) for v in t.get("frame", [])]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormError(f"simplices[{k}] is malformed: {exc}") from None
        if top in terms:
            raise FormError(f"simplex {list(top)} listed twice")
        terms[top] = raw
    form = PolyForm(K, degree, terms)
    if check_continuity:
        bad = form.continuity_defects()
        if bad:
            raise FormError(f"form is not tangentially continuous across {list(bad[0])}")
    return form
