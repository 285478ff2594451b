"""Check suites behind the command-line subcommands; each returns a ReportDocument."""
from __future__ import annotations

import math
import warnings
from itertools import product

import numpy as np

from .config import RunConfig
from .exterior_clifford import ModelParams, omega_d
from .expansion_pipeline import compute_F2, compute_b0, load_anchors, specialize
from .identities import IdentityRuleSet
from .report import FAIL, PASS, WARN, CheckRecord, ReportDocument, merge, within

MAX_CUTOFF_MULTI = 20


def _record(key: str, name: str, status: str, expected, actual, tol, params: str = "") -> CheckRecord:
    a = load_anchors().get(key, {})
    return CheckRecord(name, a.get("paper_ref", ""), a.get("quote", ""), status, expected, actual, tol, params)


def _params_string(**kw) -> str:
    parts = []
    for k, v in kw.items():
        if isinstance(v, (tuple, list)):
            v = ",".join(f"{x:.12g}" if isinstance(x, float) else str(x) for x in v)
        elif isinstance(v, float):
            v = f"{v:.12g}"
        parts.append(f"{k}={v}")
    return ";".join(parts)


def _rules(config: RunConfig) -> IdentityRuleSet:
    return IdentityRuleSet.load(config.rules or None)


# --------------------------------------------------------------------------
# symbolic
# --------------------------------------------------------------------------

def cmd_symbolic_b1(config: RunConfig, ledger: list | None = None) -> ReportDocument:
    """Run the F_2 calculus; one record per intermediate step."""
    rules = _rules(config)
    rep = compute_F2(rules)
    if ledger is not None:
        ledger.append(rep.to_text())
    checks = []
    for c in rep.checks:
        status = PASS if c.match else FAIL
        mode = "exact" if c.mode == "literal" else f"exact modulo {c.mode}"
        if c.axiom:
            mode += " (imported, not derived)"
        checks.append(_record(c.name, c.name, status, c.expected.to_text(), c.computed.to_text(), mode))
    if config.flat:
        flat = specialize(rep.b1, {"NABLAJ", "NABLA2J", "RTX", "RE", "RX", "TRT10", "D1RL", "D2RL"})
        checks.append(_record("flat_b1", "flat_b1", PASS if flat.canonical().is_zero() else FAIL,
                              "0", flat.canonical().to_text() or "0", "exact"))
    return ReportDocument("symbolic-b1", config.echo(), checks, rep.ruleset_hash)


def cmd_check_identities(config: RunConfig) -> ReportDocument:
    from .validation import validate_clifford_curvature, validate_rules
    rules = _rules(config)
    checks = []
    params = _params_string(n=2, instances=config.jets, seed=config.seed)
    for res in validate_rules(rules, n=2, instances=config.jets, seed=config.seed):
        rule = rules[res.name]
        checks.append(CheckRecord(f"rule:{res.name}", rule.paper_ref, rule.quote,
                                  PASS if res.passed else FAIL, 0, len(res.failures), 0, params))
    cc = validate_clifford_curvature(2, config.jets, config.seed)
    checks.append(_record("clifford_curvature_contraction", "clifford_curvature_contraction",
                          PASS if cc.passed else FAIL, 0, len(cc.failures), 0, params))
    return ReportDocument("check-identities", config.echo(), checks, rules.hash())


# --------------------------------------------------------------------------
# numeric model
# --------------------------------------------------------------------------

def expected_levels(a, count: int) -> list[float]:
    """Lowest ``count`` distinct values of sum_j 2 |a_j| k_j."""
    a = [abs(x) for x in a]
    top = count + 1
    vals = sorted({round(sum(2 * x * k for x, k in zip(a, ks)), 9)
                   for ks in product(range(top), repeat=len(a))})
    return vals[:count]


def cmd_model_spectrum(config: RunConfig) -> ReportDocument:
    from .numeric.fock import (
        FockBasisSpec, L0_matrix, L02_matrix, TruncationWarning, distinct_levels, level_multiplicity_count,
        lowest_levels, sector_eigh,
    )
    params = ModelParams(config.model_a)
    n = params.n
    # the basis grows like C(N + 2n, 2n); larger n runs at a desk-scale cutoff
    cutoff = config.cutoff if n == 1 else min(config.cutoff, MAX_CUTOFF_MULTI)
    ps = _params_string(n=n, a=params.a, cutoff=cutoff)
    checks = []
    count = 10
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        levels = lowest_levels(FockBasisSpec(n, cutoff), params, count=count)
    warned = any(issubclass(w.category, TruncationWarning) for w in caught)
    expect = expected_levels(params.a, count)
    k = min(len(levels), len(expect))
    err = float(np.max(np.abs(np.asarray(levels[:k]) - np.asarray(expect[:k])))) if k else math.inf
    status = (WARN if warned else PASS) if (k == count and err < config.spectrum_tol) else FAIL
    checks.append(_record("l0_spectrum", "l0_spectrum", status, expect, list(levels), config.spectrum_tol, ps))

    # multiplicity of the fourth level against the combinatorial count (equal a_j only)
    if len(set(abs(x) for x in params.a)) == 1:
        spec = FockBasisSpec(n, cutoff)
        vals, _ = sector_eigh(L0_matrix(spec, params), spec, vectors=False)
        lv = distinct_levels(vals)
        got = lv[3][1] if len(lv) > 3 else 0
        want = level_multiplicity_count(n, cutoff, 3)
        checks.append(_record("l0_multiplicity", "l0_multiplicity_level3", PASS if got == want else FAIL,
                              want, got, 0, ps))

    # ground space of L^0_2: the beta-degenerate vacua tensored with the Ker omega_d line
    spec = FockBasisSpec(n, min(cutoff, 6), True)
    vals, vecs = sector_eigh(L02_matrix(spec, params), spec)
    ground = vecs[:, np.abs(vals) < 1e-8]
    want = level_multiplicity_count(n, spec.cutoff, 0)
    checks.append(_record("l02_ground_space", "l02_ground_space_dimension",
                          PASS if ground.shape[1] == want else FAIL, want, int(ground.shape[1]), 0,
                          _params_string(n=n, a=params.a, cutoff=spec.cutoff)))
    line = np.abs(omega_d(params).kernel_vector) > 0.5
    outside = np.tile(~line, spec.fock_size)
    leak = float(np.linalg.norm(ground[outside])) if ground.size else math.inf
    checks.append(_record("l02_ground_space", "l02_ground_space_outside_kernel_line",
                          within(leak, 0, 1e-10), 0.0, leak, 1e-10,
                          _params_string(n=n, a=params.a, cutoff=spec.cutoff)))

    om = omega_d(params)
    checks.append(_record("model_constants", "tau", within(om.tau, sum(abs(x) for x in params.a), 1e-12),
                          sum(abs(x) for x in params.a), om.tau, 1e-12, ps))
    checks.append(_record("model_constants", "mu0", within(om.mu0, min(abs(x) for x in params.a), 1e-12),
                          min(abs(x) for x in params.a), om.mu0, 1e-12, ps))
    diag = np.diag(om.matrix).real
    nonzero = diag[np.abs(diag) > 1e-12]
    worst = float(nonzero.max()) if len(nonzero) else -math.inf
    checks.append(_record("omega_d_spectrum", "omega_d_nonzero_max", PASS if worst <= -om.mu0 + 1e-12 else FAIL,
                          -om.mu0, worst, "<=", ps))
    return ReportDocument("model-spectrum", config.echo(), checks)


def cmd_model_kernels(config: RunConfig) -> ReportDocument:
    from .numeric import kernels as K
    params = ModelParams(config.model_a)
    n = params.n
    tol = config.tol
    checks = []
    # scalar kernels factor over complex directions; each direction is checked on a 5x5 grid
    for j, a in enumerate(params.a, 1):
        pj = ModelParams((a,))
        ps = _params_string(direction=j, a=a, cutoff=config.cutoff)
        ell = math.sqrt(2 * math.pi / abs(a))
        G = K.grid(1, 5, ell)
        dev = float(np.abs(K.bergman_kernel_closed(pj, G, G)
                           - K.numeric_bergman_kernel(pj, G, G, cutoff=config.cutoff)).max())
        checks.append(_record("bergman_projector", f"bergman_projector[{j}]", within(dev, 0, tol),
                              0.0, dev, tol, ps))
        G3 = K.grid(1, 3, ell)
        for u in (0.05, 0.1, 0.5, 1.0):
            dev = float(np.abs(K.mehler_kernel_closed(pj, u, G3, G3)
                               - K.numeric_heat_kernel(pj, u, G3, G3, cutoff=max(80, config.cutoff))).max())
            checks.append(_record("mehler_matrix_exponential", f"mehler_matrix_exponential[{j},u={u:g}]",
                                  within(dev, 0, tol), 0.0, dev, tol, ps + f";u={u:g}"))
    order = 40 if n == 1 else 20
    pts = K.grid(n, 3, 0.5 * math.sqrt(2 * math.pi / max(abs(x) for x in params.a)))[::2]
    ps = _params_string(n=n, a=params.a, order=order)
    dev = K.reproducing_error(params, pts, order=order)
    checks.append(_record("bergman_reproducing", "bergman_reproducing", within(dev, 0, tol), 0.0, dev, tol, ps))
    dev = K.semigroup_error(params, 0.1, 0.3, pts, order=order)
    checks.append(_record("mehler_semigroup", "mehler_semigroup", within(dev, 0, tol), 0.0, dev, tol, ps))

    ps = _params_string(n=n, a=params.a)
    b0 = compute_b0(params).matrix
    dev = float(np.abs(K.numeric_b0(params) - b0).max())
    checks.append(_record("b0", "b0_numeric_projector", within(dev, 0, tol), 0.0, dev, tol, ps))
    dev = float(np.abs(K.bergman_at_origin(params) - b0).max())
    checks.append(_record("b0", "b0_closed_form", within(dev, 0, tol), 0.0, dev, tol, ps))
    leak = K.kernel_leakage(params)
    checks.append(_record("kernel_leakage", "kernel_leakage", within(leak, 0, 1e-8), 0.0, leak, 1e-8, ps))
    rate = K.heat_to_bergman_rate(params)
    checks.append(_record("heat_to_bergman_rate", "heat_to_bergman_rate",
                          within(-rate.slope, rate.expected, config.rate_tol, relative=True),
                          rate.expected, -rate.slope, config.rate_tol, ps))
    return ReportDocument("model-kernels", config.echo(), checks)


def cmd_oracle(config: RunConfig) -> ReportDocument:
    res = _oracle_safe(config)
    ps = _params_string(words=config.words, degree=4, n_max=2, seed=config.seed)
    rec = _record("word_oracle", "word_oracle", PASS if res.passed else FAIL, 0.0, res.max_deviation,
                  config.oracle_tol, ps)
    return ReportDocument("oracle", config.echo(), [rec])


def _oracle_safe(config):
    from .numeric.oracle import OracleFailure, OracleResult, random_word_oracle
    try:
        return random_word_oracle(config.words, n_max=2, max_degree=4, seed=config.seed, tol=config.oracle_tol)
    except OracleFailure as exc:
        return OracleResult(math.inf, config.oracle_tol, config.words, str(exc))


def cmd_torus_gap(config: RunConfig) -> ReportDocument:
    from .numeric.torus import ResolutionError, torus_gap
    checks = []
    for p in config.flux:
        ps = _params_string(flux=p, grid=config.grid)
        try:
            r = torus_gap(p, config.grid)
        except ResolutionError as exc:
            checks.append(_record("torus_low_cluster", f"torus_low_cluster[p={p}]", FAIL, p,
                                  f"ResolutionError: {exc}", 0, ps))
            continue
        checks.append(_record("torus_low_cluster", f"torus_low_cluster[p={p}]",
                              PASS if r.low_cluster == p else FAIL, p, r.low_cluster, 0, ps))
        checks.append(_record("torus_gap", f"torus_gap[p={p}]",
                              within(r.gap, r.expected_gap, config.rate_tol, relative=True),
                              r.expected_gap, r.gap, config.rate_tol, ps))
    return ReportDocument("torus-gap", config.echo(), checks)


def cmd_report(config: RunConfig, ledger: list | None = None) -> ReportDocument:
    docs = [cmd_symbolic_b1(config, ledger), cmd_check_identities(config), cmd_model_spectrum(config),
            cmd_model_kernels(config), cmd_oracle(config), cmd_torus_gap(config)]
    return merge("report", config.echo(), docs)
