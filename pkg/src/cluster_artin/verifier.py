"""Word triviality certification and homomorphism verification.

Three layers, cheapest first.  The abelianization filter is a necessary
condition computed from exponent sums.  Todd-Coxeter coset enumeration
decides words exactly in the finite Coxeter quotient (the Artin presentation
plus involution relators).  Finally a bounded best-first search over relator
insertions either produces a replayable proof certificate of triviality in
the Artin group itself or reports NotFound, which is always inconclusive and
never a claim of nontriviality.

Certificates are replayed by an independent code path before being reported;
a replay failure or a certificate for a quotient-rejected word is raised as a
hard error rather than recorded.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from heapq import heappop, heappush

from .diagram import Diagram, _thread_count
from .mapping import GroupMap, Presenter, compose, phi, psi, transport
from .presentation import (
    Presentation,
    Relator,
    Word,
    artin_presentation,
    coxeter_quotient,
    splice,
    t_relator,
    t3_qualifies,
)


class VerifierError(RuntimeError):
    """Internal inconsistency: bad certificate or layer disagreement."""


class CappedTableError(VerifierError):
    """A capped coset table cannot decide word triviality."""


# ---------------------------------------------------------------------------
# Todd-Coxeter coset enumeration


@dataclass(frozen=True)
class CosetTable:
    """Action of the generators on cosets of the trivial subgroup.

    Columns alternate generator, inverse: letter +g uses column 2(g-1) and
    -g uses column 2(g-1)+1.  A complete table is the regular representation,
    so its size is the group order.
    """

    n_generators: int
    rows: tuple[tuple[int, ...], ...]
    status: str  # "complete" | "capped"

    @property
    def order(self) -> int | None:
        return len(self.rows) if self.status == "complete" else None

    def validate(self, P: Presentation) -> bool:
        """Check the permutation property and that every relator scans home."""
        if self.status != "complete":
            return False
        size = len(self.rows)
        for c in range(2 * self.n_generators):
            column = [row[c] for row in self.rows]
            if sorted(column) != list(range(size)):
                return False
        for rel in P.relators:
            cols = [_col(x) for x in rel.word.letters]
            for start in range(size):
                cur = start
                for c in cols:
                    cur = self.rows[cur][c]
                if cur != start:
                    return False
        return True


def _col(letter: int) -> int:
    return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1


DEFAULT_COSET_CAP = 1_000_000
# Compact the working table once it is this large and mostly dead.
COMPACT_THRESHOLD = 4096


def todd_coxeter(P: Presentation, coset_cap: int = DEFAULT_COSET_CAP) -> CosetTable:
    """HLT-style coset enumeration of P over the trivial subgroup.

    Relators are scanned and filled coset by coset in first-definition order,
    with coincidences processed eagerly and the table compacted when mostly
    dead.  Returns a capped table instead of raising when the cap is hit.
    """
    ncols = 2 * P.n_generators
    relcols = [tuple(_col(x) for x in r.word.letters) for r in P.relators]
    table: list[list[int | None]] = [[None] * ncols]
    p: list[int] = [0]
    defined = 1

    def rep(k: int) -> int:
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    queue: list[int] = []
    n_dead = [0]

    def merge(a: int, b: int) -> None:
        a, b = rep(a), rep(b)
        if a != b:
            a, b = min(a, b), max(a, b)
            p[b] = a
            n_dead[0] += 1
            queue.append(b)

    def coincidence(a: int, b: int) -> None:
        merge(a, b)
        qi = 0
        while qi < len(queue):
            gamma = queue[qi]
            qi += 1
            for c in range(ncols):
                delta = table[gamma][c]
                if delta is None:
                    continue
                table[delta][c ^ 1] = None
                mu, nu = rep(gamma), rep(delta)
                existing = table[mu][c]
                if existing is not None:
                    merge(nu, existing)
                elif table[nu][c ^ 1] is not None:
                    merge(mu, table[nu][c ^ 1])
                else:
                    table[mu][c] = nu
                    table[nu][c ^ 1] = mu
        queue.clear()

    def define(alpha: int, c: int) -> int:
        nonlocal defined
        beta = len(table)
        table.append([None] * ncols)
        p.append(beta)
        table[alpha][c] = beta
        table[beta][c ^ 1] = alpha
        defined += 1
        return beta

    def scan_and_fill(alpha: int, word: tuple[int, ...]) -> None:
        f, i = alpha, 0
        b, j = alpha, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            define(f, word[i])

    def compact(alpha: int) -> int:
        nonlocal table, p
        live = [c for c in range(len(table)) if rep(c) == c]
        remap = {old: new for new, old in enumerate(live)}
        table = [
            [None if e is None else remap[rep(e)] for e in table[old]]
            for old in live
        ]
        p = list(range(len(live)))
        return sum(1 for c in live if c < alpha)

    alpha = 0
    while alpha < len(table):
        if defined > coset_cap:
            return CosetTable(P.n_generators, (), "capped")
        if rep(alpha) != alpha:
            alpha += 1
            continue
        for rel in relcols:
            scan_and_fill(alpha, rel)
            if rep(alpha) != alpha:
                break
        if rep(alpha) == alpha:
            for c in range(ncols):
                if table[alpha][c] is None:
                    define(alpha, c)
        alpha += 1
        if len(table) > COMPACT_THRESHOLD and n_dead[0] * 2 > len(table):
            alpha = compact(alpha)
            n_dead[0] = 0

    live = [c for c in range(len(table)) if rep(c) == c]
    remap = {old: new for new, old in enumerate(live)}
    rows = []
    for old in live:
        row = table[old]
        if any(e is None for e in row):
            raise VerifierError("incomplete row survived enumeration")
        rows.append(tuple(remap[rep(e)] for e in row))
    return CosetTable(P.n_generators, tuple(rows), "complete")


def word_trivial_in_coxeter(table: CosetTable, w: Word) -> bool:
    """Whether w acts trivially on every coset of a complete table."""
    if table.status != "complete":
        raise CappedTableError("capped table cannot decide triviality")
    cols = [_col(x) for x in w.letters]
    rows = table.rows

    def fixes(start: int) -> bool:
        cur = start
        for c in cols:
            cur = rows[cur][c]
        return cur == start

    if not fixes(0):
        return False
    return all(fixes(start) for start in range(1, len(rows)))


# ---------------------------------------------------------------------------
# Abelianization filter


def abelianization_check(P: Presentation, w: Word) -> bool:
    """Necessary condition for w = e: exponent sums vanish classwise.

    Generators joined by an odd braid length (m = 3) are conjugate, hence
    identified in the abelianization.  In a Coxeter-mode presentation the
    sums only need to vanish mod 2.
    """
    n = P.n_generators
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if P.m_table[i][j] == 3:
                parent[find(i)] = find(j)
    sums: dict[int, int] = {}
    for idx, s in enumerate(w.exponent_sums(n)):
        root = find(idx)
        sums[root] = sums.get(root, 0) + s
    if P.mode == "coxeter":
        return all(v % 2 == 0 for v in sums.values())
    return all(v == 0 for v in sums.values())


# ---------------------------------------------------------------------------
# Certified rewriting search


@dataclass(frozen=True)
class ProofStep:
    """Insert a cyclic rotation of a relator (or its inverse) at a position."""

    position: int
    relator_index: int
    rotation: int
    inverted: bool

    def to_json(self) -> list:
        return [self.position, self.relator_index, self.rotation,
                1 if self.inverted else 0]


@dataclass(frozen=True)
class ProofCertificate:
    """Replayable triviality proof: the steps carry `start` to the empty word."""

    start: Word
    steps: tuple[ProofStep, ...]

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "steps": [s.to_json() for s in self.steps],
        }


@dataclass(frozen=True)
class SearchBudget:
    """Bounds for the insertion search.

    max_len defaults to the start length plus len_slack; max_nodes counts
    attempted insertions.
    """

    max_nodes: int = 1_000_000
    len_slack: int = 16
    max_len: int | None = None

    def limit_for(self, w: Word) -> int:
        return self.max_len if self.max_len is not None else len(w) + self.len_slack


DEFAULT_BUDGET = SearchBudget()

_MOVE_CACHE: dict[tuple, tuple] = {}


def _presentation_key(P: Presentation) -> tuple:
    return (P.n_generators, tuple(r.word.letters for r in P.relators))


def _moves_for(P: Presentation):
    """All distinct rotated / inverted relator forms, tagged for certificates."""
    key = _presentation_key(P)
    cached = _MOVE_CACHE.get(key)
    if cached is not None:
        return cached
    moves = []
    seen = set()
    for rid, rel in enumerate(P.relators):
        core = rel.word.letters
        for rot in range(len(core)):
            rotated = core[rot:] + core[:rot]
            for inverted in (False, True):
                letters = (tuple(-x for x in reversed(rotated))
                           if inverted else rotated)
                if letters in seen:
                    continue
                seen.add(letters)
                moves.append((rid, rot, inverted, letters))
    result = tuple(moves)
    _MOVE_CACHE[key] = result
    return result


def prove_trivial(
    P: Presentation, w: Word, budget: SearchBudget = DEFAULT_BUDGET
) -> ProofCertificate | None:
    """Search for a proof that w = e in the group presented by P.

    Best-first over relator insertions: at every state each rotated relator
    form may be inserted at either end of the word or at any seam where at
    least one letter cancels.  States are deduplicated by their reduced word;
    shorter words are expanded first.  Success yields a certificate; None
    means the budget ran out and says nothing about nontriviality.
    """
    start = w.letters
    if not start:
        return ProofCertificate(w, ())
    maxlen = budget.limit_for(w)
    if len(start) > maxlen:
        return None
    moves = _moves_for(P)
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], ProofStep] | None] = {
        start: None
    }
    heap: list[tuple[int, int, tuple[int, ...]]] = [(len(start), 0, start)]
    counter = 1
    nodes = 0

    def reconstruct(end: tuple[int, ...]) -> ProofCertificate:
        steps = []
        cur = end
        while parent[cur] is not None:
            prev, step = parent[cur]  # type: ignore[misc]
            steps.append(step)
            cur = prev
        return ProofCertificate(w, tuple(reversed(steps)))

    while heap:
        _, _, cur = heappop(heap)
        seam_after: dict[int, list[int]] = {}
        for idx, x in enumerate(cur):
            seam_after.setdefault(x, []).append(idx)
        for rid, rot, inverted, letters in moves:
            positions = {0, len(cur)}
            for idx in seam_after.get(-letters[0], ()):
                positions.add(idx + 1)
            for idx in seam_after.get(-letters[-1], ()):
                positions.add(idx)
            for pos in sorted(positions):
                nodes += 1
                if nodes > budget.max_nodes:
                    return None
                nxt = splice(cur, pos, letters)
                if len(nxt) > maxlen or nxt in parent:
                    continue
                parent[nxt] = (cur, ProofStep(pos, rid, rot, inverted))
                if not nxt:
                    return reconstruct(nxt)
                heappush(heap, (len(nxt), counter, nxt))
                counter += 1
    return None


def replay_certificate(P: Presentation, cert: ProofCertificate) -> bool:
    """Independent certificate replay; True when the steps end at the empty word.

    Deliberately unlike the search: insertion by list slicing and a naive
    repeated-scan cancellation loop.
    """
    word = list(cert.start.letters)
    for step in cert.steps:
        if not 0 <= step.relator_index < len(P.relators):
            return False
        core = P.relators[step.relator_index].word.letters
        if not 0 <= step.rotation < len(core):
            return False
        rotated = core[step.rotation:] + core[:step.rotation]
        if step.inverted:
            rotated = tuple(-x for x in reversed(rotated))
        if not 0 <= step.position <= len(word):
            return False
        word[step.position:step.position] = rotated
        changed = True
        while changed:
            changed = False
            for idx in range(len(word) - 1):
                if word[idx] == -word[idx + 1]:
                    del word[idx:idx + 2]
                    changed = True
                    break
    return not word


# ---------------------------------------------------------------------------
# Verification reports


_TABLE_CACHE: dict[tuple, CosetTable] = {}


def quotient_table(P: Presentation, coset_cap: int = DEFAULT_COSET_CAP) -> CosetTable:
    """Coset table of the Coxeter quotient of P (cached per presentation)."""
    key = (_presentation_key(P), coset_cap)
    table = _TABLE_CACHE.get(key)
    if table is None:
        table = todd_coxeter(coxeter_quotient(P), coset_cap)
        _TABLE_CACHE[key] = table
    return table


def clear_caches() -> None:
    _TABLE_CACHE.clear()
    _MOVE_CACHE.clear()


@dataclass(frozen=True)
class RelatorCheck:
    relator: Relator
    transported: Word
    coxeter_trivial: bool | None
    abelianization_ok: bool
    certificate: ProofCertificate | None
    budget_limited: bool

    @property
    def failed(self) -> bool:
        return self.coxeter_trivial is False or not self.abelianization_ok

    def to_json(self) -> dict:
        return {
            "relator": self.relator.to_json(),
            "transported": self.transported.to_json(),
            "coxeter_trivial": self.coxeter_trivial,
            "abelianization_ok": self.abelianization_ok,
            "certificate": None if self.certificate is None
            else self.certificate.to_json(),
            "budget_limited": self.budget_limited,
        }


PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"
EXIT_CODES = {PASS: 0, FAIL: 2, INCONCLUSIVE: 3}


@dataclass(frozen=True)
class HomReport:
    """Per-relator verification record for one generator map."""

    map_label: str
    status: str
    checks: tuple[RelatorCheck, ...]
    coxeter_order: int | None

    def to_json(self) -> dict:
        return {
            "map": self.map_label,
            "status": self.status,
            "coxeter_order": self.coxeter_order,
            "relators": [c.to_json() for c in self.checks],
        }


def _check_one(
    target: Presentation,
    table: CosetTable,
    relator: Relator,
    image: Word,
    budget: SearchBudget,
) -> RelatorCheck:
    ab = abelianization_check(target, image)
    cox = None
    if table.status == "complete":
        cox = word_trivial_in_coxeter(table, image)
    cert = None
    if ab and cox is not False:
        cert = prove_trivial(target, image, budget)
    if cert is not None:
        if not replay_certificate(target, cert):
            raise VerifierError(
                f"certificate replay failed for {relator.provenance}"
            )
        if cox is False:
            raise VerifierError(
                f"certificate found for quotient-rejected word "
                f"{image.letters} ({relator.provenance})"
            )
        if not ab:
            raise VerifierError(
                f"certificate found for abelianization-rejected word "
                f"{image.letters} ({relator.provenance})"
            )
    return RelatorCheck(
        relator=relator,
        transported=image,
        coxeter_trivial=cox,
        abelianization_ok=ab,
        certificate=cert,
        budget_limited=cert is None and cox is not False and ab,
    )


def verify_homomorphism(
    gmap: GroupMap,
    budget: SearchBudget = DEFAULT_BUDGET,
    coset_cap: int = DEFAULT_COSET_CAP,
) -> HomReport:
    """Check that every source relator maps to a trivial word in the target.

    Each transported relator is run through the abelianization filter, the
    Coxeter quotient decision (when the table completes under the cap), and
    the certificate search.  FAIL records a definite counterexample;
    INCONCLUSIVE marks budget-limited searches and capped tables, never
    silence.
    """
    table = quotient_table(gmap.target, coset_cap)
    jobs = [(r, transport(gmap, r.word)) for r in gmap.source.relators]
    threads = _thread_count()
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            checks = list(pool.map(
                lambda job: _check_one(gmap.target, table, job[0], job[1], budget),
                jobs,
            ))
    else:
        checks = [_check_one(gmap.target, table, r, img, budget)
                  for r, img in jobs]
    if any(c.failed for c in checks):
        status = FAIL
    elif all(c.certificate is not None for c in checks):
        status = PASS
    else:
        status = INCONCLUSIVE
    return HomReport(gmap.label, status, tuple(checks), table.order)


@dataclass(frozen=True)
class InvarianceReport:
    """Result of checking one mutation-invariance instance."""

    diagram: Diagram
    vertex: int
    status: str
    phi_report: HomReport
    psi_report: HomReport
    roundtrips_exact: bool

    def to_json(self) -> dict:
        return {
            "diagram": self.diagram.to_json(),
            "vertex": self.vertex,
            "status": self.status,
            "roundtrips_exact": self.roundtrips_exact,
            "phi": self.phi_report.to_json(),
            "psi": self.psi_report.to_json(),
        }


def verify_mutation_invariance(
    G: Diagram,
    k: int,
    budget: SearchBudget = DEFAULT_BUDGET,
    coset_cap: int = DEFAULT_COSET_CAP,
    presenter: Presenter = artin_presentation,
) -> InvarianceReport:
    """Certify one instance of mutation invariance at vertex k.

    Verifies the comparison map and its reverse composite as homomorphisms
    and checks that both round trips are the identity on generators as free
    words, with no relations applied.
    """
    f = phi(G, k, presenter)
    g = psi(G, k, presenter)
    psi_phi = compose(g, f)
    phi_psi = compose(f, g)
    roundtrips = all(
        psi_phi.images[i].letters == (i + 1,)
        for i in range(psi_phi.source.n_generators)
    ) and all(
        phi_psi.images[i].letters == (i + 1,)
        for i in range(phi_psi.source.n_generators)
    )
    phi_report = verify_homomorphism(f, budget, coset_cap)
    psi_report = verify_homomorphism(g, budget, coset_cap)
    if FAIL in (phi_report.status, psi_report.status) or not roundtrips:
        status = FAIL
    elif phi_report.status == psi_report.status == PASS:
        status = PASS
    else:
        status = INCONCLUSIVE
    return InvarianceReport(G, k, status, phi_report, psi_report, roundtrips)


FUZZ_BUDGET = SearchBudget(max_nodes=600, len_slack=8)


def fuzz_soundness(
    P: Presentation,
    n_words: int,
    seed: int = 0,
    budget: SearchBudget = FUZZ_BUDGET,
    coset_cap: int = DEFAULT_COSET_CAP,
) -> dict:
    """Cross-check the prover against the Coxeter quotient on random words.

    Every certificate the small-budget search emits must replay, pass the
    abelianization filter, and be accepted by the quotient; a violation is a
    soundness bug and raises.  Returns summary counts; NotFound outcomes are
    recorded, never interpreted.
    """
    rng = random.Random(seed)
    table = quotient_table(P, coset_cap)
    stats = {"words": 0, "quotient_rejected": 0, "quotient_trivial": 0,
             "certified": 0, "not_found": 0}
    for _ in range(n_words):
        length = rng.randint(4, 12)
        letters = tuple(
            rng.randint(1, P.n_generators) * rng.choice((1, -1))
            for _ in range(length)
        )
        w = Word(letters)
        stats["words"] += 1
        trivial = None
        if table.status == "complete":
            trivial = word_trivial_in_coxeter(table, w)
            if trivial:
                stats["quotient_trivial"] += 1
            else:
                stats["quotient_rejected"] += 1
        cert = prove_trivial(P, w, budget)
        if cert is None:
            stats["not_found"] += 1
            continue
        stats["certified"] += 1
        if not replay_certificate(P, cert):
            raise VerifierError(f"fuzz certificate for {w.letters} failed replay")
        if trivial is False:
            raise VerifierError(
                f"fuzz certificate for quotient-rejected word {w.letters}"
            )
        if not abelianization_check(P, w):
            raise VerifierError(
                f"fuzz certificate for abelianization-rejected word {w.letters}"
            )
    return stats


# ---------------------------------------------------------------------------
# Rotation-closure replay (redundancy lemmas)


def derive_t3_rotations(
    G: Diagram,
    cycle_index: int = 0,
    base: int | None = None,
    budget: SearchBudget = DEFAULT_BUDGET,
):
    """Derive every qualifying (T3) rotation from a single one plus (T2).

    Follows the induction of the symmetry lemma: rotations are proved one
    step backwards around the cycle, each proof allowed to cite previously
    derived rotations.  Returns (a, presentation, certificate) triples; the
    certificate is None when a link could not be found within budget.
    """
    from .diagram import chordless_cycles

    P = artin_presentation(G)
    cycle = chordless_cycles(G)[cycle_index]
    d = len(cycle.vertices)
    qualifying = [a for a in range(d) if t3_qualifies(cycle, a)]
    if base is None:
        base = qualifying[0]
    if base not in qualifying:
        raise VerifierError(f"rotation {base} holds no (T3) relator")
    t2 = tuple(r for r in P.relators if r.family == "T2")
    proven = [t_relator(cycle, base)]
    results = []
    for offset in range(1, d):
        a = (base - offset) % d
        if a not in qualifying:
            continue
        Q = P.with_relators(t2 + tuple(proven), f"chain{base}-{a}")
        cert = prove_trivial(Q, t_relator(cycle, a).word, budget)
        results.append((a, Q, cert))
        if cert is not None:
            proven.append(t_relator(cycle, a))
    return results
