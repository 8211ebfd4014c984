"""Batch verification: the check catalog, reports, the resolution cache and braid words."""

from __future__ import annotations

import ast
import hashlib
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import click

from . import functors as fn
from . import ktheory as kt
from . import pcomplex as pc
from . import quantum as qu
from . import resolve as rs
from .arith import CMat, CycInt, is_prime, is_unit
from .pdgmod import LEFT, RIGHT, CellDiagram, projective, quasi_iso, ses_extend, truncated_splice
from .zigzag import build_algebra, derivation_report, dimension_formula, lambda_constraints, oracle_check

log = logging.getLogger("pzigzag")

JOBS_ENV = "PZIGZAG_JOBS"
BUDGET_ENV = "PZIGZAG_R3_BUDGET"
DEFAULT_R3_BUDGET = 50_000
R2_BUDGET_ENV = "PZIGZAG_R2_BUDGET"
DEFAULT_R2_BUDGET = 3_000
SUITES = ("algebra", "resolutions", "rhom", "tl", "braid", "appendix", "burau", "quantum")


class Skip(Exception):
    """Raised by a check that does not apply to the given parameters."""


class UsageError(ValueError):
    pass


@dataclass
class CheckRecord:
    id: str
    params: dict
    status: str                  # pass | fail | skipped
    witness: dict
    millis: float = 0.0

    def to_json(self) -> dict:
        return {"id": self.id, "params": self.params, "status": self.status,
                "witness": self.witness, "millis": round(self.millis, 1)}


# ---------------------------------------------------------------------------
# cache of resolutions
# ---------------------------------------------------------------------------
@dataclass
class CacheStats:
    hits: int = 0
    misses: int = 0
    discarded: int = 0

    def add(self, other: "CacheStats"):
        self.hits += other.hits
        self.misses += other.misses
        self.discarded += other.discarded


class ResolutionCache:
    """NY resolutions stored as cell-diagram JSON with a digest; hits are re-checked."""

    def __init__(self, root: str | os.PathLike | None):
        self.root = Path(root) if root else None
        self.stats = CacheStats()
        if self.root:
            self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, alg, i: int, side: str) -> Path:
        return self.root / f"ny_n{alg.n}_p{alg.p}_l{alg.lam}_{side}_{i}.json"

    @staticmethod
    def _digest(body: dict) -> str:
        return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()

    @staticmethod
    def _encode(res: rs.Resolution) -> dict:
        return {"diagram": res.diagram.to_json(),
                "names": sorted([repr(k), v] for k, v in res.names.items()),
                "vertex": res.vertex, "params": res.params}

    @staticmethod
    def fast_check(res: rs.Resolution) -> bool:
        """d^p = 0 and one slash homology: a single V_0 in degree 0."""
        c = res.module.complex
        return pc.validate(c) is None and pc.slash_homology(c, 1) == {0: 1}

    def _load(self, alg, path: Path):
        try:
            entry = json.loads(path.read_text())
            body = entry["body"]
            if entry["digest"] != self._digest(body):
                return None
            res = rs.Resolution(alg, CellDiagram.from_json(body["diagram"]),
                                {ast.literal_eval(k): v for k, v in body["names"]},
                                body["params"], body["vertex"])
            return res if self.fast_check(res) else None
        except Exception:          # any damage means: rebuild
            return None

    def resolution(self, alg, i: int, side: str = LEFT) -> rs.Resolution:
        if self.root is None:
            return rs.ny_resolution(alg, i, side)
        path = self._path(alg, i, side)
        if path.exists():
            res = self._load(alg, path)
            if res is not None:
                self.stats.hits += 1
                return res
            log.warning("discarding corrupt cache entry %s", path.name)
            self.stats.discarded += 1
            path.unlink()
        self.stats.misses += 1
        res = rs.ny_resolution(alg, i, side)
        body = self._encode(res)
        path.write_text(json.dumps({"digest": self._digest(body), "body": body}, sort_keys=True))
        return res


# ---------------------------------------------------------------------------
# the check catalog
# ---------------------------------------------------------------------------
@dataclass
class Context:
    n: int
    p: int
    lam: int
    cache: ResolutionCache = field(default_factory=lambda: ResolutionCache(None))

    @cached_property
    def alg(self):
        return build_algebra(self.n, self.p, self.lam)

    def need_lambda(self, *values):
        if self.lam not in values:
            raise Skip(f"needs lambda in {sorted(values)}")


@dataclass
class Check:
    suite: str
    id: str
    fn: object
    expand: object


CATALOG: dict = {}


def _once(ctx):
    return [{}]


def _each_i(ctx):
    return [{"i": i} for i in range(1, ctx.n)]


def check(suite: str, cid: str, expand=_once):
    def deco(f):
        CATALOG[cid] = Check(suite, cid, f, expand)
        return f
    return deco


def _mat(m: CMat) -> list:
    return [[str(v) for v in row] for row in m.rows()]


# algebra --------------------------------------------------------------------
@check("algebra", "algebra.dimension")
def _c_dimension(ctx):
    return ctx.alg.dim == dimension_formula(ctx.n), {"dim": ctx.alg.dim, "formula": dimension_formula(ctx.n)}


@check("algebra", "algebra.oracle")
def _c_oracle(ctx):
    rep = oracle_check(ctx.alg)
    return all(r["ok"] for r in rep.values()), {str(k): v for k, v in rep.items()}


@check("algebra", "algebra.derivation")
def _c_derivation(ctx):
    rep = derivation_report(ctx.alg)
    return all(rep.values()), rep


@check("algebra", "algebra.lambda_constraints")
def _c_lambda(ctx):
    got = lambda_constraints(ctx.p)
    want = {0, 1} if ctx.p == 2 else {1}
    return got == want, {"computed": sorted(got), "expected": sorted(want)}


# resolutions ------------------------------------------------------------------
def _each_i_side(ctx):
    return [{"i": i, "side": s} for i in range(1, ctx.n) for s in (LEFT, RIGHT)]


@check("resolutions", "resolutions.ny", _each_i_side)
def _c_ny(ctx, i, side):
    ctx.need_lambda(0, 1)
    alg = ctx.alg
    res = ctx.cache.resolution(alg, i, side)
    c = res.module.complex
    reduced = pc.noncontractible(pc.decompose(c), ctx.p)
    dims = {j: projective(alg, j).dim if 1 <= j <= ctx.n else 0 for j in (i - 1, i, i + 1)}
    want_dim = 2 * dims[i] + (ctx.p - 1) * (dims[i - 1] + dims[i + 1])
    w = {"dim": res.module.dim, "expected_dim": want_dim, "reduced": _counter(reduced),
         "nilpotent": pc.validate(c) is None, "augmentation_quasi_iso": quasi_iso(res.augmentation)}
    ok = w["nilpotent"] and w["augmentation_quasi_iso"] and reduced == {(0, 0): 1} and res.module.dim == want_dim
    return ok, w


@check("resolutions", "resolutions.last_simple", lambda ctx: [{"side": LEFT}, {"side": RIGHT}])
def _c_ln(ctx, side):
    need = 0 if side == LEFT else 1
    ctx.need_lambda(need)
    res = rs.ln_resolution(ctx.alg, side)
    ok = quasi_iso(res.augmentation)
    sym = kt.symbol_module(res.module) == kt.simple_class(ctx.n, ctx.p, ctx.n) if side == LEFT else True
    return ok and sym, {"augmentation_quasi_iso": ok, "symbol_matches": sym}


@check("resolutions", "resolutions.ses_acyclic", _each_i)
def _c_ses(ctx, i):
    ctx.need_lambda(1)
    phi, psi, _ = rs.simple_ses(ctx.alg, i)
    w = {}
    for v in (1, 2):
        w[f"variant{v}"] = pc.is_acyclic(ses_extend(phi, psi, v).complex)
    w["splice"] = pc.is_acyclic(truncated_splice([phi, psi]).complex)
    return all(w.values()), w


# rhom --------------------------------------------------------------------------
def _each_ij(ctx):
    return [{"i": i, "j": j} for i in range(1, ctx.n) for j in range(1, ctx.n + 1)]


def _counter(c) -> list:
    return [[j, b, m] for (j, b), m in sorted(c.items())]


@check("rhom", "rhom.simples", _each_ij)
def _c_rhom(ctx, i, j):
    ctx.need_lambda(0, 1)
    got, want = rs.rhom_simples(ctx.alg, i, j), rs.expected_rhom_simples(ctx.p, i, j)
    return got == want, {"computed": _counter(got), "expected": _counter(want)}


@check("rhom", "rhom.tensor", _each_ij)
def _c_tensor(ctx, i, j):
    ctx.need_lambda(0, 1)
    got, want = rs.tensor_simples(ctx.alg, i, j), rs.expected_tensor_simples(ctx.p, i, j)
    return got == want, {"computed": _counter(got), "expected": _counter(want)}


@check("rhom", "rhom.dual", _each_i)
def _c_dual(ctx, i):
    ctx.need_lambda(0, 1)
    cert = fn.dual_certificate(ctx.alg, i)
    return cert.verify(), cert.to_json()["legs"][0]["witness"]


# Temperley-Lieb ------------------------------------------------------------------
@check("tl", "tl.certificates")
def _c_tl(ctx):
    ctx.need_lambda(0, 1)
    certs = fn.verify_tl_relations(ctx.alg)
    bad = [list(k) for k, c in certs.items() if not c.verify()]
    return not bad, {"count": len(certs), "failed": bad}


@check("tl", "tl.k0_matrix", _each_i)
def _c_tl_matrix(ctx, i):
    ctx.need_lambda(0, 1)
    alg = ctx.alg
    m = kt.matrix_of(alg, lambda P: fn.tl_functor(alg, i, P))
    u = kt.tl_matrix(ctx.n, ctx.p, i)
    return m == u, {"from_modules": _mat(m), "closed_form": _mat(u)}


@check("tl", "tl.k0_presentation")
def _c_tl_pres(ctx):
    n, p = ctx.n, ctx.p
    circle = -(CycInt.q(p) + CycInt.q(p, -1))
    u = [kt.tl_matrix(n, p, i) for i in range(1, n)]
    w = {"square": all(x @ x == x.scale(circle) for x in u)}
    w["adjacent"] = all(u[a] @ u[b] @ u[a] == u[a] for a in range(n - 1) for b in range(n - 1) if abs(a - b) == 1)
    w["far"] = all(u[a] @ u[b] == u[b] @ u[a] for a in range(n - 1) for b in range(n - 1) if abs(a - b) > 1)
    w["hermitian"] = all(kt.is_hermitian(x) for x in u)
    w["gram_unit"] = kt.gram_perfect(n, p)
    return all(w.values()), w


# braiding -------------------------------------------------------------------------
@check("braid", "braid.k0_twist", _each_i)
def _c_k0_twist(ctx, i):
    ctx.need_lambda(0, 1)
    alg, n, p = ctx.alg, ctx.n, ctx.p
    T = kt.decat(alg, fn.build_T(alg, i))
    Tp = kt.matrix_of(alg, lambda P: fn.twist_inverse(alg, i, P))
    pr, prp = kt.closed_form_twist_matrix(n, p, i), kt.closed_form_twist_matrix(n, p, i, inverse=True)
    w = {
        "T_exact": T == kt.twist_matrix(n, p, i),
        "Tprime_exact": Tp == kt.twist_matrix(n, p, i, inverse=True),
        "T_closed_form_at_root": T.to_root() == pr.to_root(),
        "Tprime_closed_form_at_root": Tp.to_root() == prp.to_root(),
        "closed_form_over_Op": T == pr and Tp == prp,
        "factor": str(kt.discrepancy_factor(p)),
    }
    ok = w["T_exact"] and w["Tprime_exact"] and w["T_closed_form_at_root"] and w["Tprime_closed_form_at_root"]
    return ok, w


@check("braid", "braid.k0_relations")
def _c_k0_rel(ctx):
    return _braid_relations(ctx.n, ctx.p, lambda i, s: kt.twist_matrix(ctx.n, ctx.p, i, inverse=s < 0))


def _braid_relations(n: int, p: int, gen) -> tuple:
    I = CMat.identity(n, CycInt, p)
    w = {"inverse": all(gen(i, 1) @ gen(i, -1) == I and gen(i, -1) @ gen(i, 1) == I for i in range(1, n))}
    w["braid"] = all(gen(i, 1) @ gen(i + 1, 1) @ gen(i, 1) == gen(i + 1, 1) @ gen(i, 1) @ gen(i + 1, 1)
                     for i in range(1, n - 1))
    w["far"] = all(gen(i, 1) @ gen(j, 1) == gen(j, 1) @ gen(i, 1)
                   for i in range(1, n) for j in range(i + 2, n))
    return all(w.values()), w


def r2_size(ctx, i: int) -> int:
    a = ctx.cache.resolution(ctx.alg, i, RIGHT).module.dim
    return a * a * ctx.p


def _r2_budget(ctx, i: int) -> int:
    budget = int(os.environ.get(R2_BUDGET_ENV, DEFAULT_R2_BUDGET))
    size = r2_size(ctx, i)
    if size > budget:
        raise Skip(f"size {size} over the budget {budget}")
    return size


@check("braid", "braid.R2", _each_i)
def _c_r2(ctx, i):
    ctx.need_lambda(0, 1)
    _r2_budget(ctx, i)
    certs = fn.verify_braid_R2(ctx.alg, i)
    return all(c.verify() for c in certs), {"certificates": [c.note for c in certs],
                                           "dims": [c.start.dim for c in certs]}


@check("braid", "braid.R2_objectwise", _each_i)
def _c_r2o(ctx, i):
    ctx.need_lambda(0, 1)
    _r2_budget(ctx, i)
    certs = fn.verify_braid_R2_objectwise(ctx.alg, i)
    return all(c.verify() for c in certs.values()), {"objects": sorted("/".join(k) for k in certs)}


def r3_size(ctx, i: int) -> int:
    a = ctx.cache.resolution(ctx.alg, i, RIGHT).module.dim
    b = ctx.cache.resolution(ctx.alg, i + 1, RIGHT).module.dim
    return a * b * a


@check("braid", "braid.R3", lambda ctx: [{"i": i} for i in range(1, ctx.n - 1)])
def _c_r3(ctx, i):
    ctx.need_lambda(0, 1)
    budget = int(os.environ.get(BUDGET_ENV, DEFAULT_R3_BUDGET))
    size = r3_size(ctx, i)
    if size > budget:
        raise Skip(f"size {size} over the budget {budget}")
    rep = fn.verify_braid_R3(ctx.alg, i)
    ok = all(rep["checks"].values()) and all(c.verify() for c in rep["certificates"].values())
    return ok, {"checks": rep["checks"], "objects": sorted(rep["certificates"]), "size": size}


@check("braid", "braid.far", lambda ctx: [{"i": i, "j": j} for i in range(1, ctx.n) for j in range(i + 2, ctx.n)])
def _c_far(ctx, i, j):
    ctx.need_lambda(0, 1)
    certs = fn.verify_far_commutation(ctx.alg, i, j)
    return all(c.verify() for c in certs.values()), {"objects": sorted(certs)}


# psi, phi, factorials ----------------------------------------------------------------------------
def _each_inner(ctx):
    return [{"i": i} for i in range(1, ctx.n - 1)]


@check("appendix", "appendix.psi", _each_inner)
def _c_psi(ctx, i):
    ctx.need_lambda(1)
    rep = rs.resolution_map_report(rs.psi_map(ctx.alg, i))
    return rep["chain"] and rep["nontrivial"] and rep["stable_dim"] == 1, rep


@check("appendix", "appendix.phi", _each_inner)
def _c_phi(ctx, i):
    ctx.need_lambda(1)
    rep = rs.resolution_map_report(rs.phi_map(ctx.alg, i))
    return rep["chain"] and rep["nontrivial"] and rep["stable_dim"] == 1, rep


@check("appendix", "appendix.factorials")
def _c_fact(ctx):
    used = rs.factorials_used(ctx.p)
    return all(r % ctx.p for _, r in used), {"factorials": used}


# Burau and quantum ------------------------------------------------------------------------
@check("burau", "burau.relations")
def _c_burau(ctx):
    n, p = ctx.n, ctx.p
    ok, w = _braid_relations(n, p, lambda i, s: qu.burau_matrix(n, p, i, s))
    I = CMat.identity(n, CycInt, p)
    q2 = CycInt.q(p, 2)
    w["quadratic"] = all((qu.burau_matrix(n, p, i) + I.scale(q2)) @ (qu.burau_matrix(n, p, i) - I) == CMat.zero((n, n), CycInt, p)
                         for i in range(1, n))
    w["matches_tensor_action"] = all(qu.restrict_to_l_basis(qu.braid_op(n, p, i, s), n, p) == qu.burau_matrix(n, p, i, s)
                                     for i in range(1, n) for s in (1, -1))
    return all(w.values()), w


def _each_i_sign(ctx):
    return [{"i": i, "sign": s} for i in range(1, ctx.n) for s in (1, -1)]


@check("burau", "burau.square", _each_i_sign)
def _c_square(ctx, i, sign):
    ctx.need_lambda(0, 1)
    rep = qu.commuting_square(ctx.n, ctx.p, ctx.lam, i, sign)
    return rep.at_root, rep.to_json()


@check("quantum", "quantum.relations")
def _c_qrel(ctx):
    rep = qu.tensor_rep(ctx.n, ctx.p).relations()
    return all(rep.values()), rep


@check("quantum", "quantum.weight_spaces")
def _c_weights(ctx):
    n, p = ctx.n, ctx.p
    dims = {w: len(qu.weight_space(n, p, w)) for w in range(-n, n + 1, 2)}
    ok = sum(dims.values()) == 2 ** n and dims[n - 2] == n
    return ok, {"dims": {str(k): v for k, v in dims.items()}}


@check("quantum", "quantum.l_basis")
def _c_lbasis(ctx):
    n, p = ctx.n, ctx.p
    L = qu.l_basis(n, p)
    Lw = L.submatrix(qu.weight_space(n, p, n - 2), list(range(n)))
    d = Lw.det()
    stable = all(qu.restrict_to_l_basis(qu.braid_op(n, p, i, s), n, p) is not None
                 for i in range(1, n) for s in (1, -1))
    return is_unit(d) and stable, {"det": str(d), "weight_space_stable": stable}


@check("quantum", "quantum.commutation", _each_i_sign)
def _c_commute(ctx, i, sign):
    opp = qu.commutes_with_quantum_group(ctx.n, ctx.p, i, sign, opposite=True)
    std = qu.commutes_with_quantum_group(ctx.n, ctx.p, i, sign)
    return all(opp.values()), {"opposite_coproduct": opp, "default_coproduct": std}


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------
def validate_params(suite: str, n: int, p: int, lam: int):
    if suite != "all" and suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    if not is_prime(p):
        raise UsageError(f"p={p} is not prime")
    if n < 2:
        raise UsageError("n must be at least 2")
    if not 0 <= lam < p:
        raise UsageError(f"lambda must lie in 0..{p - 1}")


def planned(suite: str, ctx: Context) -> list:
    wanted = SUITES if suite == "all" else (suite,)
    out = []
    for c in CATALOG.values():
        if c.suite in wanted:
            out.extend((c.id, params) for params in c.expand(ctx))
    return out


def run_check(ctx: Context, cid: str, params: dict) -> CheckRecord:
    t0 = time.perf_counter()
    try:
        ok, witness = CATALOG[cid].fn(ctx, **params)
        status = "pass" if ok else "fail"
    except Skip as e:
        status, witness = "skipped", {"reason": str(e)}
    except Exception as e:          # a crash is a failure with the error as witness
        status, witness = "fail", {"error": f"{type(e).__name__}: {e}"}
    return CheckRecord(cid, params, status, _jsonable(witness), (time.perf_counter() - t0) * 1000)


def _jsonable(x):
    return json.loads(json.dumps(x, default=str))


def _worker(args):
    n, p, lam, cache_dir, cid, params = args
    ctx = Context(n, p, lam, ResolutionCache(cache_dir))
    rec = run_check(ctx, cid, params)
    return rec, ctx.cache.stats


def job_count(jobs: int | None) -> int:
    env = os.environ.get(JOBS_ENV)
    if env:
        return max(1, int(env))
    return max(1, jobs or 1)


def run_suite(suite: str, n: int, p: int, lam: int = 1, jobs: int | None = None,
              cache_dir: str | None = None, stats: CacheStats | None = None) -> dict:
    """Run the registered checks; cache counters are added to ``stats`` and logged, not reported."""
    validate_params(suite, n, p, lam)
    ctx = Context(n, p, lam, ResolutionCache(cache_dir))
    plan = planned(suite, ctx)
    stats = stats if stats is not None else CacheStats()
    jobs = job_count(jobs)
    if jobs > 1 and len(plan) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker, [(n, p, lam, cache_dir, cid, prm) for cid, prm in plan]))
        records = [r for r, _ in results]
        for _, s in results:
            stats.add(s)
    else:
        records = [run_check(ctx, cid, prm) for cid, prm in plan]
        stats.add(ctx.cache.stats)
    if cache_dir:
        log.info("resolution cache: %d hits, %d misses, %d discarded", stats.hits, stats.misses, stats.discarded)
    summary = {s: sum(r.status == s for r in records) for s in ("pass", "fail")}
    summary["skipped"] = sum(r.status == "skipped" for r in records)
    return {"suite": suite, "params": {"n": n, "p": p, "lambda": lam},
            "checks": [r.to_json() for r in records], "summary": summary}


def deterministic_view(report: dict) -> str:
    """The report without timing fields, as canonical JSON."""
    body = dict(report)
    body["checks"] = [{k: v for k, v in c.items() if k != "millis"} for c in report["checks"]]
    return json.dumps(body, sort_keys=True)


def exit_code(report: dict) -> int:
    return 0 if report["summary"]["fail"] == 0 else 1


def render(report: dict) -> str:
    lines = [f"suite={report['suite']} " + " ".join(f"{k}={v}" for k, v in report["params"].items())]
    for c in report["checks"]:
        prm = ",".join(f"{k}={v}" for k, v in c["params"].items())
        lines.append(f"  {c['status']:<8} {c['id']}[{prm}]  {c['millis']:.0f} ms")
        if c["status"] != "pass":
            lines.append(f"           {json.dumps(c['witness'])[:200]}")
    s = report["summary"]
    lines.append(f"pass={s['pass']} fail={s['fail']} skipped={s['skipped']}")
    return "\n".join(lines)


# braid words ---------------------------------------------------------------
def eval_braid_word(word: str, n: int, p: int, level: str = "k0", lam: int = 1) -> dict:
    """Product matrix of a braid word; k0 uses the matrices of the twist functors, quantum the Burau matrices."""
    try:
        letters = qu.parse_word(word)
    except ValueError as e:
        raise UsageError(str(e)) from None
    for k, _ in letters:
        if not 1 <= k <= n - 1:
            raise UsageError(f"generator s{k} needs n > {k}")
    if level not in ("k0", "quantum"):
        raise UsageError("level must be k0 or quantum")
    if level == "quantum":
        M = qu.burau_word(n, p, letters)
    else:
        alg = build_algebra(n, p, lam)
        mats = {}
        M = CMat.identity(n, CycInt, p)
        for k, s in letters:
            if (k, s) not in mats:
                if s > 0:
                    mats[(k, s)] = kt.decat(alg, fn.build_T(alg, k))
                else:
                    mats[(k, s)] = kt.matrix_of(alg, lambda P, k=k: fn.twist_inverse(alg, k, P))
            M = M @ mats[(k, s)]
    return {"word": word, "n": n, "p": p, "level": level, "matrix": _mat(M),
            "at_root": _mat(M.to_root()), "identity": M == CMat.identity(n, CycInt, p)}


# command line -------------------------------------------------------------------
@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--n", "n", type=int, default=3, show_default=True, help="number of strands / vertices")
@click.option("--p", "p", type=int, default=3, show_default=True, help="the prime")
@click.option("--lambda", "lam", type=int, default=1, show_default=True, help="the differential parameter")
@click.option("--suite", default="all", show_default=True, help="|".join(SUITES + ("all",)))
@click.option("--jobs", type=int, default=None, help=f"worker processes (env {JOBS_ENV} overrides)")
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None, help="resolution cache")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None, help="write the report here")
@click.option("--word", default=None, help="evaluate a braid word such as 's1 S2 s1' instead of a suite")
@click.option("--level", type=click.Choice(["k0", "quantum"]), default="k0", show_default=True)
@click.option("-v", "--verbose", is_flag=True)
def main(n, p, lam, suite, jobs, cache_dir, json_path, word, level, verbose):
    """Verify the p-DG zigzag categorification for one parameter tuple."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if word is not None:
            if not is_prime(p) or n < 2:
                raise UsageError("need a prime p and n >= 2")
            out = eval_braid_word(word, n, p, level, lam)
            text = json.dumps(out, indent=2, sort_keys=True)
            click.echo(text)
            if json_path:
                Path(json_path).write_text(text)
            sys.exit(0)
        report = run_suite(suite, n, p, lam, jobs, cache_dir)
    except UsageError as e:
        click.echo(f"usage error: {e}", err=True)
        sys.exit(2)
    click.echo(render(report))
    if json_path:
        Path(json_path).write_text(json.dumps(report, indent=2, sort_keys=True))
    sys.exit(exit_code(report))


if __name__ == "__main__":
    main()
