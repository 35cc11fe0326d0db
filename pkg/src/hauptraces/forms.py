"""
Positive definite binary quadratic forms [a, b, c] = aX^2 + bXY + cY^2 and
their classes under SL2(Z), Gamma0(p) and the Fricke extension Gamma0*(p).

Matrices are 4-tuples (alpha, beta, gamma, delta). Forms are acted on by
substitution, (Q o g)(x, y) = Q(alpha x + beta y, gamma x + delta y), so
that (Q o g) o h = Q o (g h) and the CM point moves as alpha_{Q o g} =
g^{-1} alpha_Q.

Gamma0(p)-classes inside one SL2-class R correspond to orbits of Aut(R) on
the points of P^1(F_p) where R vanishes mod p (first column of the coset
representative). This covers imprimitive forms with p | content, where one
SL2-class splits into several Gamma0(p)-classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

Matrix = tuple[int, int, int, int]

IDENTITY: Matrix = (1, 0, 0, 1)
S_MATRIX: Matrix = (0, -1, 1, 0)


def mat_mul(g: Matrix, h: Matrix) -> Matrix:
    a, b, c, d = g
    e, f, k, l = h
    return (a * e + b * k, a * f + b * l, c * e + d * k, c * f + d * l)


def mat_inv(g: Matrix) -> Matrix:
    a, b, c, d = g
    return (d, -b, -c, a)


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.disc >= 0:
            raise ValueError(f"[{self.a},{self.b},{self.c}] is not positive definite")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def d(self) -> int:
        """d with discriminant -d."""
        return -self.disc

    @property
    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def act(self, g: Matrix) -> "QuadForm":
        al, be, ga, de = g
        a, b, c = self.a, self.b, self.c
        return QuadForm(
            a * al * al + b * al * ga + c * ga * ga,
            2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de,
            a * be * be + b * be * de + c * de * de,
        )

    def translate(self) -> "QuadForm":
        """T-power translate with b in (-a, a]; stays in the same Gamma0(p)-class."""
        return self.act(_translation(self))

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


def _translation(Q: QuadForm) -> Matrix:
    # b + 2ak in (-a, a]
    k = (Q.a - Q.b) // (2 * Q.a)
    return (1, k, 0, 1)


# ---------------------------------------------------------------------------
# discriminants and SL2 reduction
# ---------------------------------------------------------------------------


def discriminant_ok(d: int, p: int) -> tuple[bool, list[int]]:
    """Is -d a square mod 4p? Also returns every beta mod 2p with beta^2 = -d mod 4p."""
    betas = [b for b in range(2 * p) if (b * b + d) % (4 * p) == 0]
    return bool(betas), betas


def sl2_reduce_with_matrix(Q: QuadForm) -> tuple[QuadForm, Matrix]:
    """Reduced form R and g in SL2(Z) with Q o g = R."""
    g = IDENTITY
    while True:
        t = _translation(Q)
        if t[1]:
            Q = Q.act(t)
            g = mat_mul(g, t)
        if Q.a > Q.c:
            Q = Q.act(S_MATRIX)
            g = mat_mul(g, S_MATRIX)
            continue
        if Q.a == Q.c and Q.b < 0:
            Q = Q.act(S_MATRIX)
            g = mat_mul(g, S_MATRIX)
        return Q, g


def sl2_reduce(Q: QuadForm) -> QuadForm:
    """The unique reduced form (|b| <= a <= c, b >= 0 on the boundary) equivalent to Q."""
    return sl2_reduce_with_matrix(Q)[0]


@lru_cache(maxsize=4096)
def enumerate_sl2_classes(d: int) -> tuple[QuadForm, ...]:
    """All reduced forms of discriminant -d, imprimitive ones included."""
    if d <= 0:
        raise ValueError("d must be positive")
    out = []
    a = 1
    while 3 * a * a <= d:
        for b in range(-a + 1, a + 1):
            num = b * b + d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            out.append(QuadForm(a, b, c))
        a += 1
    return tuple(sorted(out))


@lru_cache(maxsize=8192)
def sl2_automorphs(R: QuadForm) -> tuple[Matrix, ...]:
    """All g in SL2(Z) (both signs) with R o g = R."""
    f = R.content
    a, b, c = R.a // f, R.b // f, R.c // f
    dp = R.d // (f * f)
    out = []
    for t in (-2, -1, 0, 1, 2):
        rest = 4 - t * t
        if rest % dp:
            continue
        u2 = rest // dp
        u = isqrt(u2)
        if u * u != u2:
            continue
        for s in {u, -u}:
            if (t - b * s) % 2:
                continue
            g = ((t - b * s) // 2, -c * s, a * s, (t + b * s) // 2)
            if R.act(g) == R:
                out.append(g)
    return tuple(sorted(set(out)))


def _point(x: int, y: int, p: int) -> tuple[int, int]:
    x %= p
    y %= p
    if x:
        return (1, y * pow(x, -1, p) % p)
    if y:
        return (0, 1)
    raise ValueError("not a point of P^1(F_p)")


def _complete(x: int, y: int) -> Matrix:
    """An SL2(Z) matrix with first column (x, y); requires gcd(x, y) = 1."""
    # x*v - y*u = 1
    g0, s, t = _ext_gcd(x, -y)
    if g0 == -1:
        s, t = -s, -t
    elif g0 != 1:
        raise ValueError("first column must be primitive")
    return (x, t, y, s)


def _ext_gcd(a: int, b: int):
    # returns (g, s, t) with a*s + b*t = g
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# Gamma0(p) classes
# ---------------------------------------------------------------------------


def _orbit(R: QuadForm, pt: tuple[int, int], p: int) -> frozenset:
    out = set()
    for s in sl2_automorphs(R):
        al, be, ga, de = s
        out.add(_point(al * pt[0] + be * pt[1], ga * pt[0] + de * pt[1], p))
    return frozenset(out)


def class_key(Q: QuadForm, p: int) -> tuple[QuadForm, tuple[int, int]]:
    """Complete Gamma0(p)-invariant of Q: its reduced form and coset orbit."""
    R, g = sl2_reduce_with_matrix(Q)
    if p == 1:
        return R, (0, 0)
    h = mat_inv(g)  # Q = R o h
    pt = _point(h[0], h[2], p)
    return R, min(_orbit(R, pt, p))


def gamma0_equivalent(Q1: QuadForm, Q2: QuadForm, p: int) -> Matrix | None:
    """A matrix gamma in Gamma0(p) with Q1 o gamma = Q2, or None.

    Works from explicit transformation matrices, independently of class_key.
    """
    if Q1.disc != Q2.disc:
        return None
    R1, g1 = sl2_reduce_with_matrix(Q1)
    R2, g2 = sl2_reduce_with_matrix(Q2)
    if R1 != R2:
        return None
    g2i = mat_inv(g2)
    for s in sl2_automorphs(R1):
        gam = mat_mul(mat_mul(g1, s), g2i)
        if gam[2] % p == 0:
            assert Q1.act(gam) == Q2
            return gam
    return None


@dataclass(frozen=True)
class FormClass:
    representative: QuadForm
    group: str  # "SL2", "Gamma0" or "Gamma0*"
    p: int
    stabilizer_order: int
    beta: int | None = None
    key: tuple = field(default=(), compare=False, repr=False)

    @property
    def weight(self):
        from fractions import Fraction

        return Fraction(1, self.stabilizer_order)


def _small_vectors(bound: int):
    vs = []
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            if (x or y) and gcd(x, y) == 1:
                vs.append((x, y))
    return vs


_VEC_CACHE: dict[int, list] = {}


def _best_representative(R: QuadForm, orbit: frozenset, p: int) -> QuadForm:
    bound = 2 * p + 1
    vs = _VEC_CACHE.get(bound)
    if vs is None:
        vs = _VEC_CACHE[bound] = _small_vectors(bound)
    best = None
    for x, y in vs:
        val = R(x, y)
        if val % p or (best is not None and val > best[0]):
            continue
        if _point(x, y, p) not in orbit:
            continue
        F = R.act(_complete(x, y)).translate()
        key = (F.a, abs(F.b), -F.b)
        if best is None or key < best[1]:
            best = (val, key, F)
    if best is None:
        raise RuntimeError(f"no small representative for {R} at level {p}")
    return best[2]


@lru_cache(maxsize=None)
def _gamma0_classes_all(d: int, p: int) -> tuple[FormClass, ...]:
    """Gamma0(p)-classes of Q_{d,p} over all beta sectors."""
    out = []
    for R in enumerate_sl2_classes(d):
        aut = len(sl2_automorphs(R)) // 2
        if p == 1:
            out.append(FormClass(R, "SL2", 1, aut))
            continue
        pts = [(1, k) for k in range(p)] + [(0, 1)]
        zeros = [pt for pt in pts if R(*pt) % p == 0]
        seen = set()
        for pt in zeros:
            orb = _orbit(R, pt, p)
            if orb in seen:
                continue
            seen.add(orb)
            rep = _best_representative(R, orb, p)
            out.append(FormClass(rep, "Gamma0", p, aut // len(orb), rep.b % (2 * p), key=(R, min(orb))))
    return tuple(out)


def gamma0_classes(d: int, p: int, beta: int) -> list[FormClass]:
    """Representatives of Q_{d,p,beta} / Gamma0(p) with stabilizer orders."""
    ok, betas = discriminant_ok(d, p)
    if d <= 0 or not ok or beta % (2 * p) not in betas:
        raise ValueError(f"invalid (d, p, beta) = ({d}, {p}, {beta})")
    beta %= 2 * p
    return [C for C in _gamma0_classes_all(d, p) if C.beta == beta or p == 1]


def fricke_action(Q: QuadForm, p: int) -> QuadForm:
    """[a, b, c] -> [p c, -b, a / p], the action of tau -> -1/(p tau)."""
    if Q.a % p:
        raise ValueError("Fricke action needs p | a")
    return QuadForm(p * Q.c, -Q.b, Q.a // p)


@lru_cache(maxsize=None)
def _gamma0star_classes(d: int, p: int) -> tuple[FormClass, ...]:
    if p == 1:
        return tuple(FormClass(C.representative, "SL2", 1, C.stabilizer_order) for C in _gamma0_classes_all(d, 1))
    classes = _gamma0_classes_all(d, p)
    index = {C.key: i for i, C in enumerate(classes)}
    used = set()
    out = []
    for i, C in enumerate(classes):
        if i in used:
            continue
        j = index[class_key(fricke_action(C.representative, p), p)]
        used.update((i, j))
        if i == j:
            out.append(FormClass(C.representative, "Gamma0*", p, 2 * C.stabilizer_order, key=C.key))
        else:
            D = classes[j]
            # prefer the member with the larger imaginary part of its CM point
            rep = min(C.representative, D.representative, key=lambda F: (F.a, abs(F.b), -F.b))
            out.append(FormClass(rep, "Gamma0*", p, C.stabilizer_order, key=C.key))
    return tuple(out)


def gamma0star_classes(d: int, p: int) -> list[FormClass]:
    """Representatives of Q_{d,p} / Gamma0*(p); Fricke-fixed classes double their stabilizer."""
    ok, _ = discriminant_ok(d, p)
    if d <= 0 or not ok:
        raise ValueError(f"-{d} is not a square mod {4 * p}")
    return list(_gamma0star_classes(d, p))


def gamma0_classes_bruteforce(d: int, p: int, beta: int, a_max: int | None = None) -> list[list[QuadForm]]:
    """Partition every form of Q_{d,p,beta} with p | a <= a_max, b in (-a, a],
    into Gamma0(p)-orbits using explicit equivalence matrices.

    The default window is large enough to meet every class: a class
    containing R o g, with R reduced and g's first column of size <= p,
    has a member with a <= c_R (1 + p/2 + p^2/4).
    """
    if a_max is None:
        c_max = max(R.c for R in enumerate_sl2_classes(d))
        a_max = c_max * (4 + 2 * p + p * p) // 4 + p
    beta %= 2 * p
    forms = []
    for a in range(p, a_max + 1, p):
        for b in range(-a + 1, a + 1):
            if (b - beta) % (2 * p):
                continue
            num = b * b + d
            if num % (4 * a) == 0:
                forms.append(QuadForm(a, b, num // (4 * a)))
    orbits: list[list[QuadForm]] = []
    for F in forms:
        for orb in orbits:
            if gamma0_equivalent(orb[0], F, p) is not None:
                orb.append(F)
                break
        else:
            orbits.append([F])
    return orbits


# ---------------------------------------------------------------------------
# stabilizers by search
# ---------------------------------------------------------------------------


def _fixes(Q: QuadForm, al: int, be: int, ga: int, de: int) -> bool:
    # gamma z^2 + (delta - alpha) z - beta proportional to a z^2 + b z + c
    return ga * Q.b == Q.a * (de - al) and ga * Q.c == -Q.a * be


def stabilizer_order(Q: QuadForm, p: int, group: str = "Gamma0") -> int:
    """Order of the projective stabilizer of alpha_Q, by exhaustive search.

    Elliptic elements are enumerated by trace and lower-left entry, which
    is bounded by twice (max(a, |b|, c) + 2). group is "SL2", "Gamma0" or
    "Gamma0*"; for the latter the Fricke coset is included as integer
    matrices of determinant p with p | alpha, gamma, delta (scaled by 1/sqrt p).
    """
    bound = 2 * (max(Q.a, abs(Q.b), Q.c) + 2)
    level = 1 if group == "SL2" else p
    count = 2  # +-I
    for t in (-1, 0, 1):
        for ga in range(-bound, bound + 1):
            if ga == 0 or ga % level:
                continue
            # alpha + delta = t, delta - alpha = ga b / a
            if (ga * Q.b) % Q.a or (ga * Q.c) % Q.a:
                continue
            diff = ga * Q.b // Q.a
            if (t - diff) % 2:
                continue
            al = (t - diff) // 2
            de = t - al
            be = -ga * Q.c // Q.a
            if al * de - be * ga == 1 and _fixes(Q, al, be, ga, de):
                count += 1
    if group == "Gamma0*":
        traces = [t for t in range(-2 * p, 2 * p + 1) if t * t < 4 * p and t % p == 0]
        for t in traces:
            for ga in range(-bound * p, bound * p + 1):
                if ga == 0 or ga % p:
                    continue
                if (ga * Q.b) % Q.a or (ga * Q.c) % Q.a:
                    continue
                diff = ga * Q.b // Q.a
                if (t - diff) % 2:
                    continue
                al = (t - diff) // 2
                de = t - al
                be = -ga * Q.c // Q.a
                if al % p or de % p:
                    continue
                if al * de - be * ga == p and _fixes(Q, al, be, ga, de):
                    count += 1
    return count // 2


# ---------------------------------------------------------------------------
# principal forms
# ---------------------------------------------------------------------------


def principal_forms(d: int, p: int = 3) -> list[QuadForm]:
    """Forms [p, b, (b^2 + d) / 4p] with b in (-p, p] and b^2 = -d mod 4p."""
    ok, _ = discriminant_ok(d, p)
    if d <= 0 or not ok:
        raise ValueError(f"-{d} is not a square mod {4 * p}")
    return [
        QuadForm(p, b, (b * b + d) // (4 * p))
        for b in range(-p + 1, p + 1)
        if (b * b + d) % (4 * p) == 0
    ]


def represents(Q: QuadForm, n: int) -> bool:
    """Does Q(x, y) = n have an integer solution? Finite search using
    Q(x, y) >= d y^2 / 4a and the symmetric bound for x."""
    ymax = isqrt(4 * Q.a * n // Q.d) + 1
    xmax = isqrt(4 * Q.c * n // Q.d) + 1
    return any(Q(x, y) == n for x in range(-xmax, xmax + 1) for y in range(-ymax, ymax + 1))


def gamma0star_equivalent(Q1: QuadForm, Q2: QuadForm, p: int) -> bool:
    return gamma0_equivalent(Q1, Q2, p) is not None or gamma0_equivalent(fricke_action(Q1, p), Q2, p) is not None


def lemma_conditions(Q: QuadForm, p: int = 3) -> tuple[bool, bool, bool]:
    """Three conditions on classes that contain a principal form:

    (1) Q represents p over the integers;
    (2) the Gamma0*(p)-class of Q has a member with a = p (searched through
        the coset description of the class);
    (3) Q is Gamma0*(p)-equivalent to a principal form (explicit matrices).
    """
    c1 = represents(Q, p)
    keys = {class_key(Q, p), class_key(fricke_action(Q, p), p)}
    c2 = False
    for R, _ in keys:
        ymax = isqrt(4 * R.a * p // R.d) + 1
        xmax = isqrt(4 * R.c * p // R.d) + 1
        for x in range(-xmax, xmax + 1):
            for y in range(-ymax, ymax + 1):
                if gcd(x, y) == 1 and R(x, y) == p:
                    if class_key(R.act(_complete(x, y)), p) in keys:
                        c2 = True
    c3 = any(gamma0star_equivalent(Q, P, p) for P in principal_forms(Q.d, p))
    return c1, c2, c3


def _represents_at_cusp(Q: QuadForm, n: int, p: int) -> bool:
    # Q(x, y) = n with gcd(x, y) = 1 and p | y: the first column of a Gamma0(p) matrix
    ymax = isqrt(4 * Q.a * n // Q.d) + 1
    xmax = isqrt(4 * Q.c * n // Q.d) + 1
    return any(
        Q(x, y) == n and gcd(x, y) == 1
        for x in range(-xmax, xmax + 1)
        for y in range(-ymax, ymax + 1)
        if y % p == 0
    )


def is_equiv_principal(Q: QuadForm, d: int | None = None, p: int = 3) -> bool:
    """Gamma0*(p)-equivalence to a principal form.

    Decided by representations: Q o gamma has first coefficient Q(alpha, gamma),
    so Q is Gamma0(p)-equivalent to some [p, B, C] exactly when Q(x, y) = p
    for coprime x, y with p | y; the Fricke coset is handled through the
    Fricke image. Any [p, B, C] is then translated to a principal form.
    A bare representation Q(x, y) = p is necessary but not sufficient:
    [6, 5, 2] takes the value 3 at (1, -1) yet lies in neither coset.
    """
    if d is not None and Q.d != d:
        raise ValueError("form has the wrong discriminant")
    return _represents_at_cusp(Q, p, p) or _represents_at_cusp(fricke_action(Q, p), p, p)


def cm_point(Q: QuadForm) -> tuple[int, int, int]:
    """(-b, d, 2a), encoding alpha_Q = (-b + i sqrt(d)) / (2a)."""
    return (-Q.b, Q.d, 2 * Q.a)
