"""Cyclotomic cosets, defining-set cyclic codes, analytic distance bounds,
and exact Hamming-metric distance / covering-radius certification.

A cyclic code of length n over F_Q (gcd(n, Q) = 1) is described by its
defining set T, a union of Q-cyclotomic cosets mod n.  The parity checks
live over the splitting field F_{Q^ord}: a word c is a codeword iff
c(beta^i) = 0 for every i in T, where beta is a fixed primitive n-th root
of unity.  beta is a deterministic power of the splitting field's canonical
generator, so independently built descriptors are identical.

Distance certification is exhaustive: supports are enumerated in
colexicographic order and coefficient tuples in product order (last
position fastest), and the first witness found in that order is the one
recorded.  Emptiness of a weight level is established by the same scan
running to completion.  Covering radii come from a syndrome sweep by
increasing weight.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from math import comb, gcd

from . import matspace
from .gf import Field, TowerMap, embedding_make, field_make, mult_order_int

DEFAULT_BUDGET = 10**9


class CyclicError(Exception):
    pass


class NotCoprime(CyclicError):
    pass


class BadRepresentative(CyclicError):
    pass


class BudgetExceeded(CyclicError):
    pass


class CapReached(CyclicError):
    pass


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest_of(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def digest_of_str(s: str) -> str:
    return hashlib.sha256(s.encode()).hexdigest()


# ---------------------------------------------------------------------------
# cyclotomic cosets


def coset(n: int, q: int, i: int) -> tuple:
    """The q-cyclotomic coset of i mod n, sorted ascending."""
    if gcd(n, q) != 1:
        raise NotCoprime(f"gcd({n}, {q}) != 1")
    if not 0 <= i < n:
        raise BadRepresentative(f"representative {i} outside [0, {n})")
    out = {i}
    x = i * q % n
    while x != i:
        out.add(x)
        x = x * q % n
    return tuple(sorted(out))


@dataclass(frozen=True)
class CosetTable:
    """Partition of Z_n into q-cyclotomic cosets, keyed by minimal element."""

    n: int
    q: int
    cosets: tuple

    def representative_of(self, i: int) -> int:
        for c in self.cosets:
            if i in c:
                return c[0]
        raise BadRepresentative(f"{i} outside [0, {self.n})")


def coset_table(n: int, q: int) -> CosetTable:
    seen = set()
    cosets = []
    for i in range(n):
        if i in seen:
            continue
        c = coset(n, q, i)
        seen.update(c)
        cosets.append(c)
    return CosetTable(n, q, tuple(cosets))


# ---------------------------------------------------------------------------
# code descriptors


@dataclass(frozen=True)
class LinearCode:
    """Length-n code over field, cut out by parity rows over check_field.

    alpha_embed carries alphabet symbols into the check field; for codes
    whose parity checks live over the alphabet itself it is the identity.
    A word c is a member iff sum_j embed(c_j) * row[j] vanishes for every
    parity row.
    """

    n: int
    field: Field
    check_field: Field
    alpha_embed: TowerMap
    parity_check: tuple
    dimension: int
    label: str
    code_id: str
    spec_json: str

    @property
    def codim(self) -> int:
        return self.n - self.dimension


@dataclass(frozen=True)
class CyclicCodeDesc(LinearCode):
    defining_set: tuple
    beta: int
    representatives: tuple


def cyclic_make(n: int, field: Field, coset_representatives) -> CyclicCodeDesc:
    """Cyclic code of length n over the field with defining set the union
    of the Q-cyclotomic cosets of the given representatives."""
    Q = field.q
    if gcd(n, Q) != 1:
        raise NotCoprime(f"gcd({n}, {Q}) != 1")
    T = set()
    for r in coset_representatives:
        T.update(coset(n, Q, int(r)))
    T = tuple(sorted(T))
    # normalize to minimal coset representatives so equal codes get equal
    # descriptors no matter which representatives the caller named
    reps = tuple(sorted({min(coset(n, Q, i)) for i in T}))

    ord_ = mult_order_int(Q, n) if n > 1 else 1
    E = field_make(field.p, field.e * ord_)
    emb = embedding_make(field, E)
    beta = E.pow(E.generator, (E.q - 1) // n)
    bpow = [E.pow(beta, k) for k in range(n)]
    parity = tuple(tuple(bpow[i * j % n] for j in range(n)) for i in T)

    spec = canonical_json({"kind": "cyclic", "length": n, "field": field.name,
                           "defining_set": list(T)})
    label = f"[{n},{n - len(T)}]_{Q}-T{{{','.join(map(str, T))}}}"
    return CyclicCodeDesc(
        n=n, field=field, check_field=E, alpha_embed=emb, parity_check=parity,
        dimension=n - len(T), label=label,
        code_id=digest_of_str(spec)[:12], spec_json=spec,
        defining_set=T, beta=beta, representatives=reps,
    )


def linear_code_from_generator(field: Field, generator, label: str = "") -> LinearCode:
    """Code given by generator rows over its own field; parity rows are a
    deterministic nullspace basis."""
    gen = tuple(tuple(int(v) for v in row) for row in generator)
    if not gen:
        raise CyclicError("empty generator matrix")
    n = len(gen[0])
    k = matspace.rank(field, gen)
    parity = matspace.nullspace(field, gen)
    spec = canonical_json({"kind": "generator", "length": n, "field": field.name,
                           "generator": [list(r) for r in gen],
                           "label": label})
    return LinearCode(
        n=n, field=field, check_field=field,
        alpha_embed=embedding_make(field, field),
        parity_check=parity, dimension=k,
        label=label or f"[{n},{k}]_{field.q}-gen",
        code_id=digest_of_str(spec)[:12], spec_json=spec,
    )


def hamming_code_make(field: Field, u: int) -> LinearCode:
    """Hamming code over F_Q with u parity checks: length (Q^u-1)/(Q-1),
    parity columns the normalized projective points of F_Q^u in ascending
    numeric order."""
    if u < 2:
        raise CyclicError(f"u must be >= 2, got {u}")
    Q = field.q
    cols = []
    for v in range(1, Q**u):
        digits = tuple((v // Q ** (u - 1 - r)) % Q for r in range(u))
        lead = next(d for d in digits if d)
        if lead == 1:
            cols.append(digits)
    t = (Q**u - 1) // (Q - 1)
    assert len(cols) == t
    parity = tuple(tuple(col[r] for col in cols) for r in range(u))
    spec = canonical_json({"kind": "hamming", "length": t, "field": field.name,
                           "checks": u})
    return LinearCode(
        n=t, field=field, check_field=field,
        alpha_embed=embedding_make(field, field),
        parity_check=parity, dimension=t - u,
        label=f"[{t},{t - u}]_{Q}-hamming",
        code_id=digest_of_str(spec)[:12], spec_json=spec,
    )


def syndrome(code: LinearCode, word) -> tuple:
    E = code.check_field
    emb = code.alpha_embed
    out = []
    for row in code.parity_check:
        acc = 0
        for c, h in zip(word, row):
            if c and h:
                acc = E.add(acc, E.mul(emb.table_lookup(c), h))
        out.append(acc)
    return tuple(out)


def is_member(code: LinearCode, word) -> bool:
    if len(word) != code.n:
        raise CyclicError(f"word length {len(word)} != {code.n}")
    return all(v == 0 for v in syndrome(code, word))


def generator_polynomial(code: CyclicCodeDesc) -> tuple:
    """Product of (x - beta^i) over the defining set, mapped back to the
    alphabet.  Low-degree-first coefficient tuple of length |T| + 1."""
    E = code.check_field
    poly = [1]
    for i in code.defining_set:
        root = E.pow(code.beta, i)
        nxt = [0] * (len(poly) + 1)
        for k, v in enumerate(poly):
            nxt[k + 1] = E.add(nxt[k + 1], v)
            nxt[k] = E.sub(nxt[k], E.mul(v, root))
        poly = nxt
    back = {code.alpha_embed.table_lookup(x): x for x in range(code.field.q)}
    try:
        return tuple(back[v] for v in poly)
    except KeyError:
        raise CyclicError("generator polynomial has a coefficient outside "
                          "the alphabet; defining set is not coset-closed")


# ---------------------------------------------------------------------------
# analytic lower bounds


def bch_designed_distance(T, n: int) -> int:
    """1 + the longest run of consecutive defining-set elements mod n."""
    Ts = set(T)
    if not Ts:
        return 1
    if len(Ts) == n:
        return n + 1
    best = 0
    for i in Ts:
        if (i - 1) % n in Ts:
            continue  # not the start of a run
        ln = 1
        while (i + ln) % n in Ts:
            ln += 1
        best = max(best, ln)
    return best + 1


def ht_bound(T, n: int) -> int:
    """Exhaustive Hartmann-Tzeng style bound: max delta + s over all
    (b, a1, a2) with a1, a2 coprime to n such that
    {b + i*a1 + j*a2 : 0 <= i <= delta-2, 0 <= j <= s} lies in T."""
    Ts = set(T)
    if not Ts:
        return 1
    if len(Ts) == n:
        return n + 1
    units = [a for a in range(1, n) if gcd(a, n) == 1]
    # runs[a1][x]: largest k with x, x+a1, ..., x+(k-1)a1 all in T
    runs = {}
    for a1 in units:
        r = [0] * n
        order = [0]
        x = a1 % n
        while x != 0:
            order.append(x)
            x = (x + a1) % n
        # rotate the a1-cycle to start at a non-member so one backward
        # pass settles the circular runs exactly
        start = next(k for k, x in enumerate(order) if x not in Ts)
        rot = order[start:] + order[:start]
        nxt = 0
        for x in reversed(rot):
            nxt = nxt + 1 if x in Ts else 0
            r[x] = nxt
        runs[a1] = r
    best = 2  # delta=2, s=0 once any element exists
    for a1 in units:
        r1 = runs[a1]
        for b in Ts:
            dmax = r1[b] + 1  # delta - 1 <= run length at b
            for a2 in units:
                delta = 2
                while delta <= dmax:
                    s = 0
                    while r1[(b + (s + 1) * a2) % n] >= delta - 1:
                        s += 1
                    if delta + s > best:
                        best = delta + s
                    delta += 1
    return best


def boston_check(T) -> bool:
    """True when {0, 1, 3, 5} lies in the defining set, which forces
    minimum distance at least 4."""
    return {0, 1, 3, 5} <= set(T)


# ---------------------------------------------------------------------------
# JSON import/export


def code_to_json(code: LinearCode) -> dict:
    return json.loads(code.spec_json)


def _field_from_name(name: str) -> Field:
    p, _, e = name.partition("^")
    return field_make(int(p), int(e) if e else 1)


def code_from_json(obj: dict) -> LinearCode:
    kind = obj.get("kind")
    field = _field_from_name(obj["field"])
    if kind == "cyclic":
        T = set(obj["defining_set"])
        code = cyclic_make(obj["length"], field, sorted(T))
        if set(code.defining_set) != T:
            raise BadRepresentative(
                "defining set is not a union of cyclotomic cosets")
        return code
    if kind == "generator":
        return linear_code_from_generator(field, obj["generator"],
                                          obj.get("label", ""))
    if kind == "hamming":
        return hamming_code_make(field, obj["checks"])
    raise CyclicError(f"unknown code kind {kind!r}")


# ---------------------------------------------------------------------------
# exhaustive certification


def supports_colex(limit: int, k: int):
    """All sorted k-subsets of range(limit) in colexicographic order."""
    if k == 0:
        yield ()
        return
    for last in range(k - 1, limit):
        for rest in supports_colex(last, k - 1):
            yield rest + (last,)


class _ScanTools:
    """Per-code precomputation for weight scans.

    Syndromes are packed into single ints (bit fields, XOR addition) in
    characteristic 2 and kept as tuples with field addition otherwise.
    """

    def __init__(self, code: LinearCode):
        self.code = code
        E = code.check_field
        self.E = E
        Q = code.field.q
        self.Q = Q
        emb = code.alpha_embed
        npar = len(code.parity_check)
        self.npar = npar
        cols = [tuple(code.parity_check[r][j] for r in range(npar))
                for j in range(code.n)]
        self.packed = E.p == 2
        self.emb_table = [emb.table_lookup(c) for c in range(Q)]
        self.emb_inv = {v: c for c, v in enumerate(self.emb_table)}

        if self.packed:
            self.width = max(1, (E.q - 1).bit_length())
            self.mask = (1 << self.width) - 1
            self.zero = 0

            def pack(vec):
                acc = 0
                for k, v in enumerate(vec):
                    acc |= v << (k * self.width)
                return acc

            self.pack = pack
            self.sadd = lambda a, b: a ^ b
            self.sneg = lambda s: s
        else:
            self.zero = (0,) * npar
            self.pack = lambda vec: tuple(vec)
            add = E.add
            self.sadd = lambda a, b, _add=add: tuple(map(_add, a, b))
            self.sneg = lambda s, _E=E: tuple(_E.neg(v) for v in s)

        # scaled[j][c]: packed syndrome contribution of symbol c at column j
        self.scaled = []
        self.scaled_items = []
        self.solve_info = []
        for j in range(code.n):
            col = cols[j]
            per = [self.pack(tuple(E.mul(self.emb_table[c], h) for h in col))
                   for c in range(Q)]
            self.scaled.append(per)
            self.scaled_items.append(tuple((c, per[c]) for c in range(1, Q)))
            k0 = next((k for k, h in enumerate(col) if h), None)
            if k0 is None:
                self.solve_info.append(None)
            else:
                self.solve_info.append((k0, E.inv(col[k0])))

    def component(self, s, k):
        if self.packed:
            return (s >> (k * self.width)) & self.mask
        return s[k]

    def unpack(self, s) -> tuple:
        return tuple(self.component(s, k) for k in range(self.npar))

    def solve(self, j, s):
        """Smallest nonzero symbol c with c*col_j == -s, else None."""
        info = self.solve_info[j]
        if info is None:  # zero column: solvable iff s vanishes
            return 1 if s == self.zero else None
        k0, invk = info
        target = self.component(s, k0)
        if self.E.p != 2:
            target = self.E.neg(target)
        ce = self.E.mul(target, invk)
        c = self.emb_inv.get(ce)
        if not c:
            return None
        if self.scaled[j][c] == self.sneg(s):
            return c
        return None


def _coeff_solve(tools: _ScanTools, rest, idx, s, last):
    """First (coeff_tuple, c_last) completing rest+(last,) to a codeword."""
    if idx == len(rest):
        c = tools.solve(last, s)
        return ((), c) if c is not None else None
    sadd = tools.sadd
    for cc, contrib in tools.scaled_items[rest[idx]]:
        r = _coeff_solve(tools, rest, idx + 1, sadd(s, contrib), last)
        if r is not None:
            return ((cc,) + r[0], r[1])
    return None


def _scan_task(tools: _ScanTools, w: int, last: int):
    """First weight-w codeword whose support has maximum element last."""
    for rest in supports_colex(last, w - 1):
        r = _coeff_solve(tools, rest, 0, tools.zero, last)
        if r is not None:
            coeffs, c_last = r
            word = [0] * tools.code.n
            for pos, c in zip(rest, coeffs):
                word[pos] = c
            word[last] = c_last
            return tuple(word)
    return None


_POOL_STATE: dict = {}


def _pool_init(code, w):
    _POOL_STATE["tools"] = _ScanTools(code)
    _POOL_STATE["w"] = w


def _pool_task(last):
    return _scan_task(_POOL_STATE["tools"], _POOL_STATE["w"], last)


def _first_witness_at_weight(code: LinearCode, w: int, workers: int = 1,
                             tools: _ScanTools = None):
    tasks = range(w - 1, code.n)
    if workers > 1 and len(tasks) > 1:
        import multiprocessing as mp

        ctx = mp.get_context("fork")
        with ctx.Pool(workers, initializer=_pool_init,
                      initargs=(code, w)) as pool:
            for hit in pool.imap(_pool_task, tasks, chunksize=1):
                if hit is not None:
                    pool.terminate()
                    return hit
        return None
    if tools is None:
        tools = _ScanTools(code)
    for last in tasks:
        hit = _scan_task(tools, w, last)
        if hit is not None:
            return hit
    return None


@dataclass(frozen=True)
class HammingDistanceCertificate:
    """Exact distance when `distance` is set; otherwise only the bound
    d > w_max is certified.  The witness is the first codeword of minimal
    weight in scan order."""

    code_id: str
    distance: int
    w_max: int
    witness: tuple

    @property
    def is_exact(self) -> bool:
        return self.distance is not None

    @property
    def lower_bound(self) -> int:
        return self.distance if self.distance is not None else self.w_max + 1


def enumeration_cost(n: int, Q: int, w_max: int) -> int:
    """Full word count at weights 1..w_max: the deterministic budget model."""
    return sum(comb(n, w) * (Q - 1) ** w for w in range(1, w_max + 1))


def min_distance_hamming(code: LinearCode, w_max: int,
                         budget: int = DEFAULT_BUDGET,
                         workers: int = 1) -> HammingDistanceCertificate:
    """Exact minimum distance by exhaustive scan up to weight w_max."""
    if w_max < 1:
        raise CyclicError(f"w_max must be >= 1, got {w_max}")
    w_max = min(w_max, code.n)
    cost = enumeration_cost(code.n, code.field.q, w_max)
    if cost > budget:
        raise BudgetExceeded(f"predicted {cost} membership tests "
                             f"exceed budget {budget}")
    tools = None if workers > 1 else _ScanTools(code)
    for w in range(1, w_max + 1):
        hit = _first_witness_at_weight(code, w, workers, tools)
        if hit is not None:
            return HammingDistanceCertificate(code.code_id, w, w_max, hit)
    return HammingDistanceCertificate(code.code_id, None, w_max, None)


# ---------------------------------------------------------------------------
# covering radius


@dataclass(frozen=True)
class CoveringRadiusResult:
    radius: int
    syndrome_count: int
    by_weight: tuple  # ((weight, syndromes first covered there), ...)
    digest: str


def _coverage_result(tools: _ScanTools, seen: dict) -> CoveringRadiusResult:
    tally = {}
    for w in seen.values():
        tally[w] = tally.get(w, 0) + 1
    items = sorted((tools.unpack(s), w) for s, w in seen.items())
    lines = ";".join(",".join(map(str, s)) + ":" + str(w) for s, w in items)
    return CoveringRadiusResult(
        radius=max(seen.values()),
        syndrome_count=len(seen),
        by_weight=tuple(sorted(tally.items())),
        digest=hashlib.sha256(lines.encode()).hexdigest(),
    )


def _sweep_words(tools: _ScanTools, w: int, visit):
    """Visit the syndrome of every weight-w word in scan order.  visit
    returns True to stop the sweep."""

    def rec(positions, idx, s):
        if idx == len(positions):
            return visit(s)
        for _, contrib in tools.scaled_items[positions[idx]]:
            if rec(positions, idx + 1, tools.sadd(s, contrib)):
                return True
        return False

    for support in supports_colex(tools.code.n, w):
        if rec(support, 0, tools.zero):
            return True
    return False


def covering_radius_hamming(code: LinearCode, cap: int = None,
                            budget: int = DEFAULT_BUDGET) -> CoveringRadiusResult:
    """Largest distance from any word to the code, by syndrome sweep.

    Words are enumerated by increasing weight; each syndrome records the
    first weight reaching it.  Complete once all Q^codim syndromes are
    seen.  Raises CapReached when the sweep passes cap without completing.
    """
    target = code.field.q ** codim_from_checks(code)
    if target > budget:
        raise BudgetExceeded(f"{target} syndromes exceed budget {budget}")
    if cap is None:
        cap = code.n
    tools = _ScanTools(code)
    seen = {tools.zero: 0}
    state = {"words": 1}

    def visit(s):
        state["words"] += 1
        if state["words"] > budget:
            raise BudgetExceeded(f"word sweep exceeded budget {budget}")
        if s not in seen:
            seen[s] = state["w"]
            if len(seen) == target:
                return True
        return False

    if len(seen) == target:
        return _coverage_result(tools, seen)
    for w in range(1, cap + 1):
        state["w"] = w
        if _sweep_words(tools, w, visit):
            return _coverage_result(tools, seen)
    raise CapReached(f"coverage incomplete at weight cap {cap}: "
                     f"{len(seen)} of {target} syndromes")


def codim_from_checks(code: LinearCode) -> int:
    """Codimension recomputed from the stored dimension, which all
    constructors derive from actual parity checks."""
    return code.n - code.dimension
