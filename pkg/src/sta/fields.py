"""Coordinate-indexed multivector fields built from a closed constructor set.

Every field expression is a tree over a small set of constructors, and each
constructor carries an exact partial derivative in every coordinate
direction, so differential identities can be checked without numerical
differentiation (finite differences exist only as an independent
cross-check).  Evaluation is batched: ``evaluate(expr, xs)`` takes points of
shape (N, 4) and returns blade coefficients of shape (N, 16).

Field *kinds* distinguish values that share their coefficient storage but
transform differently under a change of spin frame.  Multiplication is only
defined for kind pairs with a well-defined result:

    Clifford * Clifford -> Clifford        Clifford * Left  -> Left
    Right * Clifford    -> Right           Left * Right     -> Clifford
    Right * Left        -> frame-scalar    Left * frame-scalar  -> Left
    frame-scalar * Right -> Right          frame-scalar * frame-scalar -> same

The frame-scalar kind holds algebra-valued *functions* (not sections); it is
how constant algebra elements act on spinor fields from the outside.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .algebra import (
    DIM,
    GRADES,
    CMultivector,
    Multivector,
    _coerce,
    _MVBase,
    bivector_square_class,
    gp_batch,
)
from .algebra import _exp_series, _T
from .errors import KindMismatch

__all__ = [
    "FieldExpr",
    "Constant",
    "Polynomial",
    "ScalarLinear",
    "ScalarSine",
    "ScalarGaussian",
    "Sum",
    "Scale",
    "Product",
    "Reverse",
    "GradeSelect",
    "BladeCoeff",
    "BivectorExp",
    "rotor_wave",
    "evaluate",
    "Kind",
    "Field",
    "CliffordField",
    "LeftSpinorField",
    "RightSpinorField",
    "FrameScalarField",
]

N_COORDS = 4


def evaluate(expr: "FieldExpr", xs: np.ndarray, memo: dict | None = None) -> np.ndarray:
    """Evaluate ``expr`` on points ``xs`` (N, 4), memoizing shared subtrees."""
    if memo is None:
        return expr._eval(xs, None)
    hit = memo.get(id(expr))
    if hit is not None and hit[0] is expr:
        return hit[1]
    val = expr._eval(xs, memo)
    memo[id(expr)] = (expr, val)
    return val


class FieldExpr:
    """Base node: an exact map from coordinates to blade coefficients."""

    __slots__ = ("_partials",)

    def __init__(self):
        self._partials: dict[int, FieldExpr] = {}

    def partial(self, mu: int) -> "FieldExpr":
        """Exact partial derivative along coordinate ``mu``; memoized."""
        if mu not in self._partials:
            self._partials[mu] = self._partial(mu)
        return self._partials[mu]

    def _partial(self, mu: int) -> "FieldExpr":
        raise NotImplementedError

    def _eval(self, xs: np.ndarray, memo) -> np.ndarray:
        raise NotImplementedError

    @property
    def is_complex(self) -> bool:
        return False

    @property
    def is_scalar(self) -> bool:
        """True when the value is pointwise pure grade 0."""
        return False

    # sugar used pervasively by the operator layer
    def __add__(self, other):
        return f_sum(self, other)

    def __sub__(self, other):
        return f_sum(self, f_scale(-1.0, other))

    def __neg__(self):
        return f_scale(-1.0, self)


_ZERO_R = None  # set after Constant is defined


class Constant(FieldExpr):
    """Coordinate-independent value."""

    __slots__ = ("value", "_lmat", "_rmat")

    def __init__(self, value):
        super().__init__()
        self.value = _coerce(value)
        self._lmat = None
        self._rmat = None

    def _eval(self, xs, memo):
        return np.broadcast_to(self.value.coeffs, (len(xs), DIM))

    def _partial(self, mu):
        return _zero()

    @property
    def is_complex(self):
        return isinstance(self.value, CMultivector)

    @property
    def is_scalar(self):
        return not np.any(self.value.coeffs[1:])

    def left_matrix(self) -> np.ndarray:
        """Matrix of left multiplication by the value: out = b @ L."""
        if self._lmat is None:
            self._lmat = np.tensordot(self.value.coeffs, _T.cayley, axes=([0], [0]))
        return self._lmat

    def right_matrix(self) -> np.ndarray:
        """Matrix of right multiplication by the value: out = a @ R."""
        if self._rmat is None:
            self._rmat = np.tensordot(_T.cayley, self.value.coeffs, axes=([1], [0]))
        return self._rmat


def _zero() -> Constant:
    global _ZERO_R
    if _ZERO_R is None:
        _ZERO_R = Constant(Multivector.zero())
    return _ZERO_R


def _is_zero(e: FieldExpr) -> bool:
    return isinstance(e, Constant) and e.value.norm_sup() == 0.0


class Polynomial(FieldExpr):
    """Per-blade multivariate polynomials of total degree <= 3.

    ``terms`` is a sequence of (blade_mask, coefficient, (p0, p1, p2, p3)).
    """

    __slots__ = ("terms",)
    MAX_DEGREE = 3

    def __init__(self, terms):
        super().__init__()
        norm = []
        for mask, coef, powers in terms:
            powers = tuple(int(p) for p in powers)
            if len(powers) != N_COORDS or min(powers) < 0:
                raise ValueError(f"bad powers {powers}")
            if sum(powers) > self.MAX_DEGREE:
                raise ValueError("polynomial degree above 3")
            norm.append((int(mask), complex(coef) if isinstance(coef, complex) else float(coef), powers))
        self.terms = tuple(norm)

    def _eval(self, xs, memo):
        dtype = complex if self.is_complex else float
        out = np.zeros((len(xs), DIM), dtype=dtype)
        for mask, coef, powers in self.terms:
            v = np.full(len(xs), coef, dtype=dtype)
            for mu, p in enumerate(powers):
                if p:
                    v = v * xs[:, mu] ** p
            out[:, mask] += v
        return out

    def _partial(self, mu):
        dterms = []
        for mask, coef, powers in self.terms:
            p = powers[mu]
            if p == 0:
                continue
            dp = list(powers)
            dp[mu] = p - 1
            dterms.append((mask, coef * p, tuple(dp)))
        return Polynomial(dterms) if dterms else _zero()

    @property
    def is_complex(self):
        return any(isinstance(c, complex) for _, c, _ in self.terms)

    @property
    def is_scalar(self):
        return all(mask == 0 for mask, _, _ in self.terms)


class ScalarLinear(FieldExpr):
    """slope . x + offset, as a grade-0 field."""

    __slots__ = ("slope", "offset")

    def __init__(self, slope, offset=0.0):
        super().__init__()
        self.slope = np.asarray(slope, dtype=float)
        self.offset = float(offset)

    def _eval(self, xs, memo):
        out = np.zeros((len(xs), DIM))
        out[:, 0] = xs @ self.slope + self.offset
        return out

    def _partial(self, mu):
        s = self.slope[mu]
        return Constant(Multivector.scalar(s)) if s else _zero()

    @property
    def is_scalar(self):
        return True


class ScalarSine(FieldExpr):
    """amplitude * sin(wave . x + phase), as a grade-0 field."""

    __slots__ = ("amplitude", "wave", "phase")

    def __init__(self, amplitude, wave, phase=0.0):
        super().__init__()
        self.amplitude = float(amplitude)
        self.wave = np.asarray(wave, dtype=float)
        self.phase = float(phase)

    def _eval(self, xs, memo):
        out = np.zeros((len(xs), DIM))
        out[:, 0] = self.amplitude * np.sin(xs @ self.wave + self.phase)
        return out

    def _partial(self, mu):
        k = self.wave[mu]
        if k == 0:
            return _zero()
        return ScalarSine(self.amplitude * k, self.wave, self.phase + 0.5 * np.pi)

    @property
    def is_scalar(self):
        return True


class ScalarGaussian(FieldExpr):
    """amplitude * exp(-sum_mu widths_mu (x_mu - center_mu)^2), grade 0."""

    __slots__ = ("amplitude", "widths", "center")

    def __init__(self, amplitude, widths, center):
        super().__init__()
        self.amplitude = float(amplitude)
        self.widths = np.asarray(widths, dtype=float)
        self.center = np.asarray(center, dtype=float)

    def _eval(self, xs, memo):
        out = np.zeros((len(xs), DIM))
        d = xs - self.center
        out[:, 0] = self.amplitude * np.exp(-np.sum(self.widths * d * d, axis=1))
        return out

    def _partial(self, mu):
        w = self.widths[mu]
        if w == 0:
            return _zero()
        slope = np.zeros(N_COORDS)
        slope[mu] = -2.0 * w
        lin = ScalarLinear(slope, 2.0 * w * self.center[mu])
        return Product(lin, self)

    @property
    def is_scalar(self):
        return True


class Sum(FieldExpr):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        super().__init__()
        self.left = left
        self.right = right

    def _eval(self, xs, memo):
        return evaluate(self.left, xs, memo) + evaluate(self.right, xs, memo)

    def _partial(self, mu):
        return f_sum(self.left.partial(mu), self.right.partial(mu))

    @property
    def is_complex(self):
        return self.left.is_complex or self.right.is_complex

    @property
    def is_scalar(self):
        return self.left.is_scalar and self.right.is_scalar


class Scale(FieldExpr):
    """Multiplication by a constant scalar."""

    __slots__ = ("factor", "arg")

    def __init__(self, factor, arg):
        super().__init__()
        self.factor = factor
        self.arg = arg

    def _eval(self, xs, memo):
        return self.factor * evaluate(self.arg, xs, memo)

    def _partial(self, mu):
        return f_scale(self.factor, self.arg.partial(mu))

    @property
    def is_complex(self):
        return isinstance(self.factor, complex) or self.arg.is_complex

    @property
    def is_scalar(self):
        return self.arg.is_scalar


class Product(FieldExpr):
    """Pointwise geometric product (Leibniz derivative).

    Evaluation picks the cheapest route: scalar factors broadcast over the
    other side, constant factors turn into a fixed 16x16 matrix, and only
    general x general products hit the pair kernel.
    """

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        super().__init__()
        self.left = left
        self.right = right

    def _eval(self, xs, memo):
        lv = evaluate(self.left, xs, memo)
        rv = evaluate(self.right, xs, memo)
        if self.left.is_scalar:
            return rv * lv[:, :1]
        if self.right.is_scalar:
            return lv * rv[:, :1]
        if isinstance(self.left, Constant):
            return rv @ self.left.left_matrix()
        if isinstance(self.right, Constant):
            return lv @ self.right.right_matrix()
        return gp_batch(lv, rv)

    def _partial(self, mu):
        return f_sum(
            f_product(self.left.partial(mu), self.right),
            f_product(self.left, self.right.partial(mu)),
        )

    @property
    def is_complex(self):
        return self.left.is_complex or self.right.is_complex

    @property
    def is_scalar(self):
        return self.left.is_scalar and self.right.is_scalar


class Reverse(FieldExpr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        super().__init__()
        self.arg = arg

    def _eval(self, xs, memo):
        return evaluate(self.arg, xs, memo) * _T.reverse_signs

    def _partial(self, mu):
        return f_reverse(self.arg.partial(mu))

    @property
    def is_complex(self):
        return self.arg.is_complex

    @property
    def is_scalar(self):
        return self.arg.is_scalar


class GradeSelect(FieldExpr):
    __slots__ = ("arg", "grades", "_mask")

    def __init__(self, arg, grades):
        super().__init__()
        self.arg = arg
        self.grades = frozenset(grades)
        self._mask = np.isin(GRADES, list(self.grades)).astype(float)

    def _eval(self, xs, memo):
        return evaluate(self.arg, xs, memo) * self._mask

    def _partial(self, mu):
        return GradeSelect(self.arg.partial(mu), self.grades)

    @property
    def is_complex(self):
        return self.arg.is_complex

    @property
    def is_scalar(self):
        return self.grades == frozenset({0}) or self.arg.is_scalar


class BladeCoeff(FieldExpr):
    """The coefficient of one blade, as a grade-0 field."""

    __slots__ = ("arg", "mask")

    def __init__(self, arg, mask):
        super().__init__()
        self.arg = arg
        self.mask = int(mask)

    def _eval(self, xs, memo):
        v = evaluate(self.arg, xs, memo)
        out = np.zeros((len(xs), DIM), dtype=v.dtype)
        out[:, 0] = v[:, self.mask]
        return out

    def _partial(self, mu):
        return BladeCoeff(self.arg.partial(mu), self.mask)

    @property
    def is_complex(self):
        return self.arg.is_complex

    @property
    def is_scalar(self):
        return True


class BivectorExp(FieldExpr):
    """exp(B * s(x)) for a constant bivector B and a scalar expression s.

    Simple B (B squared a scalar) evaluates through the circular or
    hyperbolic closed form; otherwise a truncated power series in B is used
    with the same convergence guard as :func:`sta.algebra.exp_bivector`.
    """

    __slots__ = ("B", "s", "_kind", "_beta", "_series")

    def __init__(self, B, s):
        super().__init__()
        self.B = _coerce(B)
        if self.B.grades_present(tol=0.0) - {2}:
            raise ValueError("BivectorExp expects a pure grade-2 bivector")
        self.s = s
        kind, beta2 = bivector_square_class(self.B)
        self._kind = kind
        self._beta = np.sqrt(beta2) if beta2 else 0.0
        self._series = None

    def _eval(self, xs, memo):
        sv = evaluate(self.s, xs, memo)[:, 0]
        dtype = complex if (self.is_complex or np.iscomplexobj(sv)) else float
        out = np.zeros((len(xs), DIM), dtype=dtype)
        if self._kind == "elliptic":
            arg = self._beta * sv
            out[:, 0] = np.cos(arg)
            out += (np.sin(arg) / self._beta)[:, None] * self.B.coeffs
        elif self._kind == "hyperbolic":
            arg = self._beta * sv
            out[:, 0] = np.cosh(arg)
            out += (np.sinh(arg) / self._beta)[:, None] * self.B.coeffs
        elif self._kind == "null":
            out[:, 0] = 1.0
            out += sv[:, None] * self.B.coeffs
        else:
            if self._series is None:
                self._series = _exp_series(self.B, smax=float(np.max(np.abs(sv))))
            acc = np.zeros((len(xs), DIM), dtype=complex)
            p = np.ones(len(xs))
            for n, term in enumerate(self._series):
                if n:
                    p = p * sv
                acc += p[:, None] * term.coeffs
            out = acc if dtype is complex else np.real(acc)
        return out

    def _partial(self, mu):
        ds = self.s.partial(mu)
        if _is_zero(ds):
            return _zero()
        return f_product(f_product(ds, Constant(self.B)), self)

    @property
    def is_complex(self):
        return isinstance(self.B, CMultivector) or self.s.is_complex


def rotor_wave(front, B, wave) -> FieldExpr:
    """front * exp(B * (wave . x)): the traveling-rotor constructor."""
    return f_product(Constant(front), BivectorExp(B, ScalarLinear(wave)))


# -- folding constructors ----------------------------------------------------

def f_sum(a: FieldExpr, b: FieldExpr) -> FieldExpr:
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    if isinstance(a, Constant) and isinstance(b, Constant):
        return Constant(a.value + b.value)
    return Sum(a, b)


def f_scale(c, a: FieldExpr) -> FieldExpr:
    if c == 0 or _is_zero(a):
        return _zero()
    if c == 1:
        return a
    if isinstance(a, Constant):
        return Constant(c * a.value)
    if isinstance(a, Scale):
        return f_scale(c * a.factor, a.arg)
    return Scale(c, a)


def f_product(a: FieldExpr, b: FieldExpr) -> FieldExpr:
    if _is_zero(a) or _is_zero(b):
        return _zero()
    if isinstance(a, Constant) and isinstance(b, Constant):
        return Constant(a.value * b.value)
    for x, other in ((a, b), (b, a)):
        if isinstance(x, Constant) and x.value == type(x.value).scalar(1.0):
            return other
    return Product(a, b)


def f_reverse(a: FieldExpr) -> FieldExpr:
    if isinstance(a, Constant):
        return Constant(a.value.reverse())
    if isinstance(a, Reverse):
        return a.arg
    if isinstance(a, BivectorExp):
        return BivectorExp(-a.B, a.s)
    if isinstance(a, Product):
        return f_product(f_reverse(a.right), f_reverse(a.left))
    if isinstance(a, Sum):
        return f_sum(f_reverse(a.left), f_reverse(a.right))
    if isinstance(a, Scale):
        return f_scale(a.factor, f_reverse(a.arg))
    return Reverse(a)


def f_commutator_half(w: FieldExpr, a: FieldExpr) -> FieldExpr:
    return f_scale(0.5, f_sum(f_product(w, a), f_scale(-1.0, f_product(a, w))))


# ---------------------------------------------------------------------------
# Field kinds
# ---------------------------------------------------------------------------


class Kind(Enum):
    CLIFFORD = "clifford"
    LEFT = "left"
    RIGHT = "right"
    FRAME_SCALAR = "frame-scalar"


_PRODUCT_KINDS = {
    (Kind.CLIFFORD, Kind.CLIFFORD): Kind.CLIFFORD,
    (Kind.CLIFFORD, Kind.LEFT): Kind.LEFT,
    (Kind.RIGHT, Kind.CLIFFORD): Kind.RIGHT,
    (Kind.LEFT, Kind.RIGHT): Kind.CLIFFORD,
    (Kind.RIGHT, Kind.LEFT): Kind.FRAME_SCALAR,
    (Kind.LEFT, Kind.FRAME_SCALAR): Kind.LEFT,
    (Kind.FRAME_SCALAR, Kind.RIGHT): Kind.RIGHT,
    (Kind.FRAME_SCALAR, Kind.FRAME_SCALAR): Kind.FRAME_SCALAR,
}


class Field:
    """A field expression tagged with its frame-change behavior."""

    __slots__ = ("kind", "expr")

    def __init__(self, kind: Kind, expr: FieldExpr):
        self.kind = kind
        self.expr = expr

    def eval(self, xs: np.ndarray, memo: dict | None = None) -> np.ndarray:
        return evaluate(self.expr, xs, memo)

    def __add__(self, other: "Field") -> "Field":
        if not isinstance(other, Field) or other.kind is not self.kind:
            raise KindMismatch("can only add fields of the same kind")
        return Field(self.kind, f_sum(self.expr, other.expr))

    def __sub__(self, other: "Field") -> "Field":
        if not isinstance(other, Field) or other.kind is not self.kind:
            raise KindMismatch("can only subtract fields of the same kind")
        return Field(self.kind, f_sum(self.expr, f_scale(-1.0, other.expr)))

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Field(self.kind, f_scale(other, self.expr))
        if isinstance(other, _MVBase):
            other = Field(Kind.FRAME_SCALAR, Constant(other))
        if not isinstance(other, Field):
            return NotImplemented
        kind = _PRODUCT_KINDS.get((self.kind, other.kind))
        if kind is None:
            raise KindMismatch(f"no product for {self.kind.value} * {other.kind.value}")
        return Field(kind, f_product(self.expr, other.expr))

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Field(self.kind, f_scale(other, self.expr))
        if isinstance(other, _MVBase):
            return Field(Kind.FRAME_SCALAR, Constant(other)) * self
        return NotImplemented

    def __neg__(self):
        return Field(self.kind, f_scale(-1.0, self.expr))

    def reverse(self) -> "Field":
        """Reversion; on spinor kinds it swaps the left/right bundles."""
        swap = {
            Kind.LEFT: Kind.RIGHT,
            Kind.RIGHT: Kind.LEFT,
            Kind.CLIFFORD: Kind.CLIFFORD,
            Kind.FRAME_SCALAR: Kind.FRAME_SCALAR,
        }
        return Field(swap[self.kind], f_reverse(self.expr))

    def __repr__(self):
        return f"Field({self.kind.value}, {type(self.expr).__name__})"


def CliffordField(expr: FieldExpr) -> Field:
    return Field(Kind.CLIFFORD, expr)


def LeftSpinorField(expr: FieldExpr) -> Field:
    return Field(Kind.LEFT, expr)


def RightSpinorField(expr: FieldExpr) -> Field:
    return Field(Kind.RIGHT, expr)


def FrameScalarField(expr: FieldExpr) -> Field:
    return Field(Kind.FRAME_SCALAR, expr)
