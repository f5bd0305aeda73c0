"""The sum-rank metric space over t blocks of n x m matrices.

A geometry fixes base field F_q, a domain extension F_{q^n}, a codomain
extension F_{q^m} with n <= m, a base-linear injection phi between them,
and a block count t.  Words have two faces related by an invertible codec:

  coefficient face: n rows a_0, ..., a_{n-1}, each a length-t vector over
    F_{q^m}; block b encodes the map x -> sum_j a_{j,b} * phi(x^{q^j})
  matrix face: t blocks, each the n x m matrix of that map with rows
    indexed by the domain basis and columns by the codomain basis

The codec is assembled as an (nm) x (nm) matrix over F_q and inverted at
construction; a phi for which it is singular raises DegenerateCodec rather
than silently producing an unfaithful representation.

Blocks also pack into single base-q integers (entry (i,j) at digit i*m+j),
which is the working currency of the enumeration machinery: per-geometry
rank tables and per-position syndrome tables are indexed by packed blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import cyclic, matspace
from .cyclic import LinearCode, canonical_json, digest_of_str
from .gf import Field, TowerMap, embedding_make, field_make, frobenius, subfield_coords

RANK_TABLE_CAP = 1 << 16


class SRError(Exception):
    pass


class GeometryMismatch(SRError):
    pass


class LengthMismatch(SRError):
    pass


class DegenerateCodec(SRError):
    pass


def _prime_power(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            if q != 1:
                raise SRError(f"{q * p**e} is not a prime power")
            return p, e
    raise SRError(f"{q} is not a prime power")


def tower_from_matrix(domain: Field, codomain: Field, base: Field,
                      matrix) -> TowerMap:
    """Base-linear map given explicitly by basis images in codomain
    coordinates.  Rejects non-injective matrices."""
    rows = tuple(tuple(int(v) for v in r) for r in matrix)
    to_dom = subfield_coords(domain, base)[0]
    from_co = subfield_coords(codomain, base)[1]
    n = len(rows)
    if matspace.rank(base, rows) != n:
        raise DegenerateCodec("phi matrix is not injective")

    table = []
    for x in range(domain.q):
        cs = to_dom(x)
        acc = [0] * len(rows[0])
        for k in range(n):
            c = cs[k]
            if c:
                acc = [base.add(a, base.mul(c, v)) for a, v in zip(acc, rows[k])]
        table.append(from_co(tuple(acc)))
    return TowerMap(domain, codomain, base, "matrix", rows, table)


@dataclass(frozen=True)
class SRGeometry:
    """t blocks of n x m matrices over F_q, with the codec fixed."""

    q: int
    n: int
    m: int
    t: int
    base: Field
    domain: Field
    codomain: Field
    phi: TowerMap
    codec_matrix: tuple
    codec_inverse_matrix: tuple

    @property
    def block_bits(self) -> int:
        return self.q ** (self.n * self.m)

    def pack_block(self, rows) -> int:
        q = self.q
        acc = 0
        w = 1
        for row in rows:
            for v in row:
                acc += v * w
                w *= q
        return acc

    def unpack_block(self, packed: int) -> tuple:
        q = self.q
        out = []
        for _ in range(self.n):
            row = []
            for _ in range(self.m):
                packed, v = divmod(packed, q)
                row.append(v)
            out.append(tuple(row))
        return tuple(out)

    def to_json(self) -> dict:
        if self.phi.kind in ("identity", "inclusion", "prefix"):
            phi_desc = self.phi.kind
        else:
            phi_desc = [list(r) for r in self.phi.matrix]
        return {"q": self.q, "n": self.n, "m": self.m, "t": self.t,
                "phi": phi_desc}

    def __repr__(self):
        return f"SRGeometry(q={self.q}, {self.n}x{self.m}, t={self.t})"


_GEOM_CACHE: dict = {}
_RANK_TABLE_CACHE: dict = {}


def geometry_make(q: int, n: int, m: int, t: int, phi=None) -> SRGeometry:
    """Build the geometry and its codec; phi defaults to the canonical
    embedding (subfield inclusion when n | m, basis-prefix map otherwise)."""
    if n > m:
        raise SRError(f"need n <= m, got {n} > {m}")
    if t < 1:
        raise SRError(f"need t >= 1, got {t}")
    p, e = _prime_power(q)
    base = field_make(p, e)
    domain = field_make(p, e * n)
    codomain = field_make(p, e * m)
    key = (q, n, m, t, id(phi) if phi is not None else None)
    cached = _GEOM_CACHE.get(key)
    if cached is not None:
        return cached
    if phi is None:
        phi = embedding_make(domain, codomain, base=base)

    to_co = subfield_coords(codomain, base)[0]
    # P[j][i] = phi(delta_i^{q^j}) for the domain basis delta
    dbasis = [domain.pow(domain.generator, i) for i in range(n)]
    P = [[phi.table_lookup(frobenius(domain, b, j, q)) for b in dbasis]
         for j in range(n)]
    gbasis = [codomain.pow(codomain.generator, k) for k in range(m)]

    cols = []
    for j in range(n):
        for k in range(m):
            flat = []
            for i in range(n):
                flat.extend(to_co(codomain.mul(gbasis[k], P[j][i])))
            cols.append(flat)
    codec = tuple(tuple(cols[c][r] for c in range(n * m))
                  for r in range(n * m))
    inv = matspace.invert(base, codec)
    if inv is None:
        raise DegenerateCodec(
            f"codec for q={q}, {n}x{m} with phi kind {phi.kind} is singular")
    geom = SRGeometry(q=q, n=n, m=m, t=t, base=base, domain=domain,
                      codomain=codomain, phi=phi, codec_matrix=codec,
                      codec_inverse_matrix=inv)
    _GEOM_CACHE[key] = geom
    return geom


def geometry_from_json(obj: dict) -> SRGeometry:
    phi_desc = obj.get("phi", "inclusion")
    q, n, m, t = obj["q"], obj["n"], obj["m"], obj["t"]
    if isinstance(phi_desc, str):
        geom = geometry_make(q, n, m, t)
        if geom.phi.kind != phi_desc and phi_desc != "identity":
            raise SRError(f"canonical phi for {n}x{m} is {geom.phi.kind}, "
                          f"descriptor says {phi_desc}")
        return geom
    p, e = _prime_power(q)
    base = field_make(p, e)
    phi = tower_from_matrix(field_make(p, e * n), field_make(p, e * m),
                            base, phi_desc)
    return geometry_make(q, n, m, t, phi)


def rank_table(geom: SRGeometry) -> list:
    """rank of every packed block; geometries above the cap are rejected."""
    key = (geom.q, geom.n, geom.m)
    tbl = _RANK_TABLE_CACHE.get(key)
    if tbl is None:
        if geom.block_bits > RANK_TABLE_CAP:
            raise SRError(f"{geom.block_bits} blocks exceed the rank table "
                          f"cap {RANK_TABLE_CAP}")
        tbl = [matspace.rank(geom.base, geom.unpack_block(x))
               for x in range(geom.block_bits)]
        _RANK_TABLE_CACHE[key] = tbl
    return tbl


def rank_classes(geom: SRGeometry) -> list:
    """rank_classes(g)[r]: ascending packed blocks of rank exactly r."""
    tbl = rank_table(geom)
    out = [[] for _ in range(min(geom.n, geom.m) + 1)]
    for x, r in enumerate(tbl):
        out[r].append(x)
    return out


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class SRWord:
    geometry: SRGeometry
    blocks: tuple

    def to_json(self) -> list:
        return [[list(row) for row in b] for b in self.blocks]


@dataclass(frozen=True)
class CoeffWord:
    geometry: SRGeometry
    coeffs: tuple  # n rows, each a length-t tuple over F_{q^m}


def word_from_json(geom: SRGeometry, obj) -> SRWord:
    blocks = tuple(tuple(tuple(int(v) for v in row) for row in b) for b in obj)
    return SRWord(geom, blocks)


def zero_word(geom: SRGeometry, blocks: int = None) -> SRWord:
    t = geom.t if blocks is None else blocks
    z = tuple(tuple(0 for _ in range(geom.m)) for _ in range(geom.n))
    return SRWord(geom, (z,) * t)


def codec_forward_block(geom: SRGeometry, symbols) -> tuple:
    """Matrix rows of x -> sum_j symbols[j] * phi(x^{q^j})."""
    co = geom.codomain
    to_co = subfield_coords(co, geom.base)[0]
    dbasis = [geom.domain.pow(geom.domain.generator, i) for i in range(geom.n)]
    rows = []
    for i in range(geom.n):
        acc = 0
        for j in range(geom.n):
            a = symbols[j]
            if a:
                img = geom.phi.table_lookup(frobenius(geom.domain, dbasis[i],
                                                      j, geom.q))
                acc = co.add(acc, co.mul(a, img))
        rows.append(to_co(acc))
    return tuple(rows)


def codec_inverse_block(geom: SRGeometry, rows) -> tuple:
    """Coefficient symbols (a_0, ..., a_{n-1}) of one block."""
    flat = [v for row in rows for v in row]
    coords = matspace.matvec(geom.base, geom.codec_inverse_matrix, flat)
    from_co = subfield_coords(geom.codomain, geom.base)[1]
    m = geom.m
    return tuple(from_co(coords[j * m:(j + 1) * m]) for j in range(geom.n))


def codec_forward(cw: CoeffWord) -> SRWord:
    geom = cw.geometry
    blocks = tuple(
        codec_forward_block(geom, tuple(cw.coeffs[j][b] for j in range(geom.n)))
        for b in range(len(cw.coeffs[0]))
    )
    return SRWord(geom, blocks)


def codec_inverse(w: SRWord) -> CoeffWord:
    geom = w.geometry
    per_block = [codec_inverse_block(geom, b) for b in w.blocks]
    coeffs = tuple(tuple(pb[j] for pb in per_block) for j in range(geom.n))
    return CoeffWord(geom, coeffs)


def wt_sr(w: SRWord) -> int:
    return sum(matspace.rank(w.geometry.base, b) for b in w.blocks)


def _block_sub(field: Field, a, b):
    return tuple(tuple(field.sub(x, y) for x, y in zip(ra, rb))
                 for ra, rb in zip(a, b))


def d_sr(u: SRWord, v: SRWord) -> int:
    if u.geometry is not v.geometry or len(u.blocks) != len(v.blocks):
        raise GeometryMismatch("words live in different spaces")
    f = u.geometry.base
    return sum(matspace.rank(f, _block_sub(f, a, b))
               for a, b in zip(u.blocks, v.blocks))


def closed_form_weight_2x2(a0, a1) -> int:
    """Closed-form sum-rank weight of the two-coefficient word over F_4 with
    2x2 binary blocks: 2 wt_H(a0) + 2 wt_H(a1) - 3 |supp(a0) & supp(a1)|.

    A block is nonzero iff either coefficient is nonzero there, and has
    rank 1 exactly when both are (the map a0 x + a1 x^2 then has the single
    nonzero root a0/a1)."""
    if len(a0) != len(a1):
        raise LengthMismatch(f"{len(a0)} != {len(a1)}")
    w0 = sum(1 for v in a0 if v)
    w1 = sum(1 for v in a1 if v)
    both = sum(1 for x, y in zip(a0, a1) if x and y)
    return 2 * w0 + 2 * w1 - 3 * both


# ---------------------------------------------------------------------------
# codes


@dataclass(frozen=True)
class SumRankCodeDesc:
    """Sum-rank code cut out componentwise: a word w is a member iff row j
    of codec_inverse(w) lies in components[j] for every j."""

    geometry: SRGeometry
    components: tuple
    codimension_total: int      # sum of component codims over F_{q^m}
    analytic_distance_bound: int
    label: str
    code_id: str
    spec_json: str

    @property
    def block_count(self) -> int:
        return self.geometry.t

    @property
    def dim_fq(self) -> int:
        g = self.geometry
        return g.m * sum(c.dimension for c in self.components)

    @property
    def codim_fq(self) -> int:
        g = self.geometry
        return g.n * g.m * g.t - self.dim_fq


def sum_rank_code_make(geom: SRGeometry, components,
                       component_distances=None,
                       label: str = "") -> SumRankCodeDesc:
    components = tuple(components)
    if len(components) != geom.n:
        raise LengthMismatch(f"need {geom.n} components, got {len(components)}")
    for c in components:
        if c.n != geom.t:
            raise LengthMismatch(f"component {c.label} has length {c.n}, "
                                 f"geometry wants {geom.t}")
        if c.field is not geom.codomain:
            raise GeometryMismatch(f"component {c.label} lives over "
                                   f"F_{c.field.name}, geometry wants "
                                   f"F_{geom.codomain.name}")
    bound = None
    if component_distances is not None:
        bound = min((j + 1) * d for j, d in enumerate(component_distances))
    spec = canonical_json({
        "kind": "sum_rank",
        "geometry": geom.to_json(),
        "components": [cyclic.code_to_json(c) for c in components],
    })
    return SumRankCodeDesc(
        geometry=geom, components=components,
        codimension_total=sum(c.codim for c in components),
        analytic_distance_bound=bound,
        label=label or "SR(" + ", ".join(c.label for c in components) + ")",
        code_id=digest_of_str(spec)[:12], spec_json=spec,
    )


def member(code, w: SRWord) -> bool:
    if isinstance(code, PlotkinSumRankCode):
        return _member_plotkin(code, w)
    if w.geometry is not code.geometry:
        raise GeometryMismatch("word geometry differs from code geometry")
    if len(w.blocks) != code.block_count:
        raise LengthMismatch(f"word has {len(w.blocks)} blocks, "
                             f"code wants {code.block_count}")
    cw = codec_inverse(w)
    return all(cyclic.is_member(comp, row)
               for comp, row in zip(code.components, cw.coeffs))


@dataclass(frozen=True)
class PlotkinSumRankCode:
    """(u | u + v) doubling: first half from `left`, offset from `right`.

    A 2t-block word (w1 | w2) is a member iff w1 is in left and w2 - w1
    is in right.  Both constituents share one geometry.
    """

    geometry: SRGeometry
    left: SumRankCodeDesc
    right: SumRankCodeDesc
    analytic_distance_bound: int
    label: str
    code_id: str
    spec_json: str

    @property
    def block_count(self) -> int:
        return 2 * self.geometry.t

    @property
    def dim_fq(self) -> int:
        return self.left.dim_fq + self.right.dim_fq

    @property
    def codim_fq(self) -> int:
        return self.left.codim_fq + self.right.codim_fq


def plotkin_make(left: SumRankCodeDesc, right: SumRankCodeDesc) -> PlotkinSumRankCode:
    if left.geometry is not right.geometry:
        raise GeometryMismatch("Plotkin sum needs one shared geometry")
    bound = None
    if (left.analytic_distance_bound is not None
            and right.analytic_distance_bound is not None):
        bound = min(2 * left.analytic_distance_bound,
                    right.analytic_distance_bound)
    spec = canonical_json({"kind": "plotkin",
                           "left": canonical_json.__self__ and None or None,
                           })
    spec = canonical_json({
        "kind": "plotkin",
        "geometry": left.geometry.to_json(),
        "left": [cyclic.code_to_json(c) for c in left.components],
        "right": [cyclic.code_to_json(c) for c in right.components],
    })
    return PlotkinSumRankCode(
        geometry=left.geometry, left=left, right=right,
        analytic_distance_bound=bound,
        label=f"plotkin({left.label}, {right.label})",
        code_id=digest_of_str(spec)[:12], spec_json=spec,
    )


def _member_plotkin(code: PlotkinSumRankCode, w: SRWord) -> bool:
    if w.geometry is not code.geometry:
        raise GeometryMismatch("word geometry differs from code geometry")
    t = code.geometry.t
    if len(w.blocks) != 2 * t:
        raise LengthMismatch(f"word has {len(w.blocks)} blocks, "
                             f"Plotkin sum wants {2 * t}")
    f = code.geometry.base
    w1 = SRWord(code.geometry, w.blocks[:t])
    diff = tuple(_block_sub(f, b2, b1)
                 for b1, b2 in zip(w.blocks[:t], w.blocks[t:]))
    return member(code.left, w1) and member(code.right, SRWord(code.geometry, diff))


def code_to_json(code) -> dict:
    import json as _json
    return _json.loads(code.spec_json)


def code_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "sum_rank":
        geom = geometry_from_json(obj["geometry"])
        comps = tuple(cyclic.code_from_json(c) for c in obj["components"])
        return sum_rank_code_make(geom, comps)
    if kind == "plotkin":
        geom = geometry_from_json(obj["geometry"])
        left = sum_rank_code_make(
            geom, tuple(cyclic.code_from_json(c) for c in obj["left"]))
        right = sum_rank_code_make(
            geom, tuple(cyclic.code_from_json(c) for c in obj["right"]))
        return plotkin_make(left, right)
    raise SRError(f"unknown sum-rank code kind {kind!r}")


# ---------------------------------------------------------------------------
# syndrome schemes


class SyndromeScheme:
    """Per-position syndrome tables for a sum-rank code.

    sigma[i][packed_block] is the syndrome contribution of placing that
    block at position i; a word is a member iff its contributions sum to
    zero.  Syndromes are concatenated component parity evaluations, packed
    into one integer (XOR addition) in characteristic 2 and kept as tuples
    otherwise.  The number of distinct syndromes of the whole space is
    q^codim_fq.
    """

    def __init__(self, code):
        geom = code.geometry
        self.code = code
        self.geom = geom
        self.positions = code.block_count
        self.target = geom.q ** code.codim_fq

        if isinstance(code, PlotkinSumRankCode):
            parts = [(comp, "L") for comp in code.left.components]
            parts += [(comp, "R") for comp in code.right.components]
        else:
            parts = [(comp, "S") for comp in code.components]

        slots = []  # (component index, parity row index, check field)
        for ci, (comp, _) in enumerate(parts):
            for r in range(len(comp.parity_check)):
                slots.append((ci, r, comp.check_field))
        self.slots = slots
        self.packed = geom.base.p == 2

        if self.packed:
            offs = []
            off = 0
            for _, _, E in slots:
                offs.append(off)
                off += max(1, (E.q - 1).bit_length())
            self.offsets = offs
            self.zero = 0
            self.sadd = lambda a, b: a ^ b
            self.sneg = lambda s: s
        else:
            self.zero = (0,) * len(slots)
            adders = [E.add for _, _, E in slots]
            negs = [E.neg for _, _, E in slots]
            self.sadd = lambda a, b, _ad=adders: tuple(
                f(x, y) for f, x, y in zip(_ad, a, b))
            self.sneg = lambda s, _ng=negs: tuple(
                f(x) for f, x in zip(_ng, s))

        nmax = geom.block_bits
        if nmax > RANK_TABLE_CAP:
            raise SRError(f"syndrome tables need {nmax} blocks <= "
                          f"{RANK_TABLE_CAP}")
        self.ranks = rank_table(geom)
        self.classes = rank_classes(geom)

        # symbol contribution tables: contrib[ci][pos][symbol] -> packed
        # syndrome of that component symbol at that component position
        t = geom.t
        contrib = []
        for ci, (comp, _) in enumerate(parts):
            E = comp.check_field
            emb = comp.alpha_embed
            rows = comp.parity_check
            per_pos = []
            for pos in range(comp.n):
                per_sym = []
                for sym in range(comp.field.q):
                    vec = [0] * len(slots)
                    ev = emb.table_lookup(sym)
                    for r in range(len(rows)):
                        slot = self._slot_index(ci, r)
                        vec[slot] = E.mul(ev, rows[r][pos])
                    per_sym.append(self._pack_vec(vec))
                per_pos.append(per_sym)
            contrib.append(per_pos)

        neg_syms = [geom.codomain.neg(s) for s in range(geom.codomain.q)]

        sigma = []
        n = geom.n
        inv_cache = [codec_inverse_block(geom, geom.unpack_block(x))
                     for x in range(nmax)]
        for i in range(self.positions):
            table = []
            for x in range(nmax):
                syms = inv_cache[x]
                acc = self.zero
                if isinstance(code, PlotkinSumRankCode):
                    if i < t:
                        for j in range(n):
                            s = syms[j]
                            if s:
                                acc = self.sadd(acc, contrib[j][i][s])
                                acc = self.sadd(acc, contrib[n + j][i][neg_syms[s]])
                    else:
                        for j in range(n):
                            s = syms[j]
                            if s:
                                acc = self.sadd(acc, contrib[n + j][i - t][s])
                else:
                    for j in range(n):
                        s = syms[j]
                        if s:
                            acc = self.sadd(acc, contrib[j][i][s])
                table.append(acc)
            sigma.append(table)
        self.sigma = sigma

    def _slot_index(self, ci, r):
        k = 0
        for idx, (c, rr, _) in enumerate(self.slots):
            if c == ci and rr == r:
                return idx
            k += 1
        raise SRError("slot not found")

    def _pack_vec(self, vec):
        if not self.packed:
            return tuple(vec)
        acc = 0
        for v, off in zip(vec, self.offsets):
            acc |= v << off
        return acc

    def unpack(self, s) -> tuple:
        if not self.packed:
            return tuple(s)
        out = []
        for k, (_, _, E) in enumerate(self.slots):
            width = max(1, (E.q - 1).bit_length())
            out.append((s >> self.offsets[k]) & ((1 << width) - 1))
        return tuple(out)

    def word_syndrome(self, blocks_packed) -> object:
        acc = self.zero
        for i, x in enumerate(blocks_packed):
            if x:
                acc = self.sadd(acc, self.sigma[i][x])
        return acc
