"""Exact multivariate polynomials and rational functions.

Sparse representation: a polynomial owns an ordered variable table and a
term map from exponent tuples to nonzero coefficients (Fraction in real
mode, GaussianRational in complexified mode).  Everything is immutable by
convention and all arithmetic is exact; no floats exist anywhere.

The text grammar (parsed by :func:`parse_expression`, emitted by the
canonical printer) is:

    expr     := ['-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := '-' factor | atom ['^' INT]
    atom     := INT ['/' INT] | NAME | 'i' | '(' expr ')'

Exponents must be plain non-negative integers; '/' only forms rational
literals; 'i' is the imaginary unit in complexified mode only.  Term order
is graded lexicographic on the table order, so printing (and hashing) is
deterministic and files round-trip.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import (
    DimensionMismatch,
    DivisionByZeroFunction,
    MalformedSyntax,
    NegativeOrNonIntegerExponent,
    NotComplexifiedMode,
    UnknownVariable,
)
from .exact import (
    GaussianRational,
    I_UNIT,
    normalize_scalar,
    scalar_conj,
    scalar_str,
)


def _gradlex_key(exps):
    return (sum(exps), exps)


class Polynomial:
    """Sparse exact polynomial over a fixed ordered variable table."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        clean = {}
        if terms:
            nvars = len(self.vars)
            for exps, coeff in terms.items():
                coeff = normalize_scalar(coeff)
                if len(exps) != nvars:
                    raise DimensionMismatch(
                        f"exponent vector {exps} does not match table of length {nvars}")
                if coeff != 0:
                    clean[tuple(exps)] = coeff
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def const(cls, variables, value):
        value = normalize_scalar(value)
        z = (0,) * len(tuple(variables))
        return cls(variables, {z: value})

    @classmethod
    def var(cls, variables, name):
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariable(f"unknown variable {name!r}")
        i = variables.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {exps: Fraction(1)})

    # -- basic queries ------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def leading(self):
        """Gradlex-leading (exps, coeff) pair; requires nonzero."""
        exps = max(self.terms, key=_gradlex_key)
        return exps, self.terms[exps]

    def constant_term(self):
        z = (0,) * len(self.vars)
        return self.terms.get(z, Fraction(0))

    def used_variables(self):
        used = set()
        for exps in self.terms:
            for name, e in zip(self.vars, exps):
                if e:
                    used.add(name)
        return used

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = normalize_scalar(other)
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * len(self.vars): other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            items = tuple(sorted(self.terms.items(), key=lambda kv: _gradlex_key(kv[0])))
            self._hash = hash((self.vars, items))
        return self._hash

    def __repr__(self):
        return f"Polynomial({print_polynomial(self)!r})"

    # -- ring operations ----------------------------------------------

    def _check_same_table(self, other):
        if self.vars != other.vars:
            raise DimensionMismatch(
                f"mixed variable tables {self.vars} vs {other.vars}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check_same_table(other)
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return Polynomial.const(self.vars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        res = dict(self.terms)
        for exps, c in other.terms.items():
            s = res.get(exps, 0) + c
            if s == 0:
                res.pop(exps, None)
            else:
                res[exps] = s
        return Polynomial(self.vars, res)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(self.terms) > 8 and len(other.terms) > 8:
            fast = self._mul_integer_fast(other)
            if fast is not None:
                return fast
        res = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = res.get(e, 0) + c1 * c2
                if s == 0:
                    res.pop(e, None)
                else:
                    res[e] = s
        return Polynomial(self.vars, res)

    __rmul__ = __mul__

    def _mul_integer_fast(self, other):
        """Large products: clear contents and multiply raw integers (one
        Fraction rescale at the end).  Rational coefficients only."""
        if not all(isinstance(c, Fraction) for c in self.terms.values()):
            return None
        if not all(isinstance(c, Fraction) for c in other.terms.values()):
            return None
        ca, cb = self.content(), other.content()
        # pack exponent tuples into one integer so products add keys
        nv = len(self.vars)
        maxdeg = max(max(e) for e in self.terms) + max(max(e) for e in other.terms)
        shift = max(maxdeg + 1, 2).bit_length()

        def pack(e):
            out = 0
            for x in e:
                out = (out << shift) | x
            return out

        mask = (1 << shift) - 1

        def unpack(key):
            e = [0] * nv
            for i in range(nv - 1, -1, -1):
                e[i] = key & mask
                key >>= shift
            return tuple(e)

        A = [(pack(e), int(c / ca)) for e, c in self.terms.items()]
        B = [(pack(e), int(c / cb)) for e, c in other.terms.items()]
        res = {}
        get = res.get
        for e1, c1 in A:
            for e2, c2 in B:
                e = e1 + e2
                res[e] = get(e, 0) + c1 * c2
        scale = ca * cb
        return Polynomial(self.vars,
                          {unpack(e): c * scale for e, c in res.items() if c})

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise NegativeOrNonIntegerExponent(f"bad exponent {k!r}")
        out = Polynomial.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c):
        c = normalize_scalar(c)
        if c == 0:
            return Polynomial.zero(self.vars)
        return Polynomial(self.vars, {e: v * c for e, v in self.terms.items()})

    # -- calculus -----------------------------------------------------

    def differentiate(self, name):
        if name not in self.vars:
            raise UnknownVariable(f"unknown variable {name!r}")
        i = self.vars.index(name)
        res = {}
        for exps, c in self.terms.items():
            if exps[i] == 0:
                continue
            e = list(exps)
            k = e[i]
            e[i] = k - 1
            e = tuple(e)
            s = res.get(e, 0) + c * k
            if s == 0:
                res.pop(e, None)
            else:
                res[e] = s
        return Polynomial(self.vars, res)

    def derive(self, images):
        """Formal derivation with prescribed generator images (product rule).

        ``images`` maps variable names to Polynomials over the *same* table;
        unmapped variables derive to zero.
        """
        out = Polynomial.zero(self.vars)
        for name in self.vars:
            img = images.get(name)
            if img is None or img.is_zero():
                continue
            out = out + self.differentiate(name) * img
        return out

    def evaluate(self, point):
        if len(point) != len(self.vars):
            raise DimensionMismatch(
                f"point of length {len(point)} vs {len(self.vars)} variables")
        out = 0
        for exps, c in self.terms.items():
            acc = c
            for x, e in zip(point, exps):
                if e:
                    acc = acc * x ** e
            out = out + acc
        return normalize_scalar(out)

    def partial_evaluate(self, assignment):
        """Substitute scalars for a subset of variables; table shrinks."""
        keep = [i for i, v in enumerate(self.vars) if v not in assignment]
        new_vars = tuple(self.vars[i] for i in keep)
        res = {}
        for exps, c in self.terms.items():
            acc = c
            for i, v in enumerate(self.vars):
                if v in assignment and exps[i]:
                    acc = acc * assignment[v] ** exps[i]
            if acc == 0:
                continue
            e = tuple(exps[i] for i in keep)
            s = res.get(e, 0) + acc
            if s == 0:
                res.pop(e, None)
            else:
                res[e] = s
        return Polynomial(new_vars, res)

    def substitute(self, mapping, target_vars):
        """Full substitution var -> Polynomial over ``target_vars``."""
        target_vars = tuple(target_vars)
        one = Polynomial.const(target_vars, 1)
        images = []
        for name in self.vars:
            img = mapping.get(name)
            if img is None:
                img = Polynomial.var(target_vars, name)
            images.append(img)
        out = Polynomial.zero(target_vars)
        cache = [dict() for _ in images]

        def power(i, e):
            if e == 0:
                return one
            got = cache[i].get(e)
            if got is None:
                got = images[i] ** e
                cache[i][e] = got
            return got

        for exps, c in self.terms.items():
            acc = Polynomial.const(target_vars, c)
            for i, e in enumerate(exps):
                if e:
                    acc = acc * power(i, e)
            out = out + acc
        return out

    def extend_to(self, new_vars):
        """Reinterpret over a larger table containing the current one."""
        new_vars = tuple(new_vars)
        idx = []
        for name in self.vars:
            if name not in new_vars:
                raise UnknownVariable(f"{name!r} missing from extended table")
            idx.append(new_vars.index(name))
        res = {}
        for exps, c in self.terms.items():
            e = [0] * len(new_vars)
            for i, k in zip(idx, exps):
                e[i] = k
            res[tuple(e)] = c
        return Polynomial(new_vars, res)

    def content(self):
        """Positive rational content of the coefficients (real parts included)."""
        nums, dens = [], []
        for c in self.terms.values():
            for part in ((c.re, c.im) if isinstance(c, GaussianRational) else (c,)):
                if part:
                    nums.append(abs(part.numerator))
                    dens.append(part.denominator)
        if not nums:
            return Fraction(1)
        g = 0
        for n in nums:
            g = gcd(g, n)
        l = 1
        for d in dens:
            l = l * d // gcd(l, d)
        return Fraction(g, l)


# ----------------------------------------------------------------------
# conjugation for complexified tables


def conjugate_name(name):
    """z1 <-> zb1, w2_3 <-> wb2_3; None when the name is not complexified."""
    for plain, barred in (("z", "zb"), ("w", "wb")):
        if name.startswith(barred) and name[len(barred):] and name[len(barred)].isdigit():
            return plain + name[len(barred):]
        if name.startswith(plain) and name[len(plain):] and name[len(plain)].isdigit():
            return barred + name[len(plain):]
    return None


def conjugate_involution(p: Polynomial) -> Polynomial:
    """Swap z<->zb, w<->wb (same jet suffix) and conjugate coefficients."""
    swapped = []
    for name in p.vars:
        other = conjugate_name(name)
        if other is None or other not in p.vars:
            raise NotComplexifiedMode(
                f"variable {name!r} has no conjugate partner in the table")
        swapped.append(p.vars.index(other))
    res = {}
    for exps, c in p.terms.items():
        e = [0] * len(p.vars)
        for i, k in enumerate(exps):
            e[swapped[i]] = k
        res[tuple(e)] = scalar_conj(c)
    return Polynomial(p.vars, res)


# ----------------------------------------------------------------------
# parser


_OPS = set("+-*^()/")


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                raise MalformedSyntax("floating point literals are not allowed", j)
            tokens.append(("INT", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("NAME", text[i:j], i))
            i = j
            continue
        raise MalformedSyntax(f"unexpected character {ch!r}", i)
    tokens.append(("END", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens, variables, complexified):
        self.tokens = tokens
        self.pos = 0
        self.vars = tuple(variables)
        self.complexified = complexified

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            raise MalformedSyntax(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self):
        p = self.expr()
        tok = self.peek()
        if tok[0] != "END":
            raise MalformedSyntax(f"trailing input {tok[1]!r}", tok[2])
        return p

    def expr(self):
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.factor()
        p = self.atom()
        if self.peek()[0] == "^":
            self.take()
            p = p ** self.exponent()
        return p

    def exponent(self):
        tok = self.peek()
        if tok[0] == "-":
            raise NegativeOrNonIntegerExponent(
                f"negative exponent at byte {tok[2]}")
        tok = self.take()
        if tok[0] != "INT":
            raise MalformedSyntax(f"expected integer exponent, found {tok[1]!r}", tok[2])
        if self.peek()[0] == "/" and self.tokens[self.pos + 1][0] == "INT":
            raise NegativeOrNonIntegerExponent(
                f"fractional exponent at byte {self.peek()[2]}")
        return tok[1]

    def atom(self):
        tok = self.take()
        kind, value, off = tok
        if kind == "INT":
            if self.peek()[0] == "/":
                self.take()
                den = self.expect("INT")
                if den[1] == 0:
                    raise MalformedSyntax("zero denominator", den[2])
                return Polynomial.const(self.vars, Fraction(value, den[1]))
            return Polynomial.const(self.vars, Fraction(value))
        if kind == "NAME":
            if value == "i" and self.complexified and "i" not in self.vars:
                return Polynomial.const(self.vars, I_UNIT)
            if value not in self.vars:
                raise UnknownVariable(f"unknown variable {value!r} at byte {off}")
            return Polynomial.var(self.vars, value)
        if kind == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise MalformedSyntax(f"unexpected token {value!r}", off)


def parse_expression(text, variables, complexified=False) -> Polynomial:
    """Parse ``text`` into the expanded canonical polynomial."""
    return _Parser(_tokenize(text), variables, complexified).parse()


def differentiate(p: Polynomial, var: str) -> Polynomial:
    return p.differentiate(var)


def evaluate(p: Polynomial, point):
    return p.evaluate(point)


# ----------------------------------------------------------------------
# canonical printer


def _monomial_str(variables, exps):
    parts = []
    for name, e in zip(variables, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def print_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for exps in sorted(p.terms, key=_gradlex_key, reverse=True):
        c = p.terms[exps]
        mono = _monomial_str(p.vars, exps)
        if isinstance(c, GaussianRational) and c.re != 0:
            sign = False
            body = scalar_str(c)
        elif isinstance(c, GaussianRational):
            sign = c.im < 0
            body = scalar_str(GaussianRational(0, abs(c.im)))
        else:
            sign = c < 0
            body = str(abs(c))
        if mono:
            body = mono if body == "1" else (f"{body}*{mono}" if body != "i" else f"i*{mono}")
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign else "") + first_body
    for sign, body in pieces[1:]:
        out += (" - " if sign else " + ") + body
    return out


# ----------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Quotient of polynomials; equality by cross-multiplication.

    Only scalar content and common monomial factors are cancelled (no
    multivariate gcd); the denominator is normalized to gradlex-leading
    coefficient 1 so representations are deterministic.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial = None):
        if den is None:
            den = Polynomial.const(num.vars, 1)
        if num.vars != den.vars:
            raise DimensionMismatch("numerator and denominator tables differ")
        if den.is_zero():
            raise DivisionByZeroFunction("zero denominator polynomial")
        if num.is_zero():
            den = Polynomial.const(num.vars, 1)
        else:
            nmin = [min(e[i] for e in num.terms) for i in range(len(num.vars))]
            dmin = [min(e[i] for e in den.terms) for i in range(len(num.vars))]
            shift = tuple(min(a, b) for a, b in zip(nmin, dmin))
            if any(shift):
                num = Polynomial(num.vars,
                                 {tuple(a - s for a, s in zip(e, shift)): c
                                  for e, c in num.terms.items()})
                den = Polynomial(den.vars,
                                 {tuple(a - s for a, s in zip(e, shift)): c
                                  for e, c in den.terms.items()})
        lead = den.leading()[1] if not den.is_zero() else 1
        if lead != 1:
            inv = 1 / lead
            num = num.scale(inv)
            den = den.scale(inv)
        if num == den:
            num = Polynomial.const(num.vars, 1)
            den = Polynomial.const(num.vars, 1)
        self.num = num
        self.den = den

    @classmethod
    def from_const(cls, variables, value):
        return cls(Polynomial.const(variables, value))

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if self.vars != other.vars:
                raise DimensionMismatch("mixed variable tables")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction, GaussianRational)):
            return RationalFunction.from_const(self.vars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise DivisionByZeroFunction("division by the zero function")
        if self.den == other.den:
            return RationalFunction(self.num, other.num)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise NegativeOrNonIntegerExponent(f"bad exponent {k!r}")
        if k < 0:
            return RationalFunction(self.den, self.num) ** (-k)
        return RationalFunction(self.num ** k, self.den ** k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den == 1:
            return f"RationalFunction({print_polynomial(self.num)!r})"
        return (f"RationalFunction({print_polynomial(self.num)!r} / "
                f"{print_polynomial(self.den)!r})")

    def differentiate(self, name):
        return RationalFunction(
            self.num.differentiate(name) * self.den
            - self.num * self.den.differentiate(name),
            self.den * self.den)

    def extend_to(self, new_vars):
        return RationalFunction(self.num.extend_to(new_vars),
                                self.den.extend_to(new_vars))

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return normalize_scalar(self.num.evaluate(point) / d)

    def value_and_gradient(self, point):
        """(value, tuple of partial-derivative values) at a point.

        Evaluates (u_i d - u d_i)/d^2 directly from polynomial evaluations,
        never forming the symbolic quotient-rule numerators.
        """
        u = self.num.evaluate(point)
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        d2 = d * d
        grad = []
        for name in self.vars:
            ui = self.num.differentiate(name).evaluate(point)
            di = self.den.differentiate(name).evaluate(point)
            grad.append(normalize_scalar((ui * d - u * di) / d2))
        return normalize_scalar(u / d), tuple(grad)


def ratfn_arithmetic(a: RationalFunction, b: RationalFunction, op: str):
    """Dispatch helper mirroring the coarse operation names."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "equal":
        return a == b
    raise ValueError(f"unknown op {op!r}")
