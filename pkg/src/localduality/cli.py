"""Command line: ``localduality {construct,verify,hochschild,bernoulli,corpus}``.

Every command prints a text report on stdout and, with ``--out``, writes the
same content as JSON (sorted keys, no timings, so reruns are byte-identical).
``--json`` prints the JSON instead of the text.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 internal error.
"""
import argparse
import json
import os
import sys

from ._rational import fmt_q, as_q
from .ainfty import construct_local_coalgebra, verify_square_zero
from .coinner import (construct_chi, build_duality, verify_duality, chain_map_residual,
                      compare_to_reference, DualityElement)
from .hochschild import transported_structure, bv_check
from .lie import construct_local_lie, verify_lie_square_zero, lie_locality, bernoulli_report
from .minimal_model import cobimodule_from_coalgebra, decompose_cobimodule, validate_decomposition
from .simplicial import default_fundamental_class, homology, chain_boundary, ComplexError
from .tensor import serialize_family, serialize_coinner, deserialize_coinner
from .validation import (InputError, FIXTURES, check_complex, check_truncation, check_coproduct,
                         parse_mu, parse_window)

SUCCESS, VERIFY_FAILED, INPUT_ERROR, INTERNAL_ERROR = 0, 1, 2, 3

# per-fixture truncation used by the corpus runner
CORPUS_N = {"point": 6, "interval": 6, "circle": 6, "sphere": 4, "torus": 4}


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def fundamental_cycle(K):
    """Shipped or unique top cycle; ``None`` when the complex has none."""
    try:
        return default_fundamental_class(K)
    except ComplexError:
        return None


def _mu(K, args):
    mu = parse_mu(K, args.mu)
    if mu is not None and chain_boundary(K, mu):
        raise InputError("mu is not a cycle")
    return fundamental_cycle(K) if mu is None else mu


def _ids(K, chain):
    return {K.cells[c].id: fmt_q(v) for c, v in sorted(chain.items())}


# ---------------------------------------------------------------------------
# construct

def run_construct(K, N, coproduct, mu, mode="canonical"):
    D = construct_local_coalgebra(K, N, coproduct)
    chi = construct_chi(K, D, mode=mode)
    F = build_duality(chi, mu) if mu is not None else None
    doc = {
        "command": "construct",
        "complex": K.name,
        "config": {"truncation": N, "coproduct": coproduct, "mode": mode,
                   "max_tensor_degree": chi.max_degree,
                   "mu": _ids(K, mu) if mu is not None else None},
        "family": serialize_family(D),
        "trace": [t.as_dict() for t in D.trace],
        "chi": {K.cells[c].id: serialize_coinner(K, v) for c, v in sorted(chi.values.items())},
        "duality": F.serialize() if F is not None else None,
        "truncation_drops": chi.dropped.count,
    }
    return doc, (D, chi, F)


def text_construct(doc, F):
    cfg = doc["config"]
    lines = ["complex %s, N=%d, coproduct %s, solve mode %s" % (
        doc["complex"], cfg["truncation"], cfg["coproduct"], cfg["mode"])]
    comps = doc["family"]["components"]
    lines.append("D components: " + ", ".join(
        "D_%s:%d" % (k, len(v)) for k, v in sorted(comps.items(), key=lambda kv: int(kv[0]))))
    if F is None:
        lines.append("no fundamental cycle: duality not built")
    else:
        lines.append("duality: shift %d, %d terms" % (F.shift, len(F.element)))
        lines.append(F.table())
    return "\n".join(lines)


def cmd_construct(args):
    K = check_complex(args.input)
    N = check_truncation(args.max_tensor_degree)
    coproduct = check_coproduct(args.coproduct)
    doc, (_D, _chi, F) = run_construct(K, N, coproduct, _mu(K, args), args.mode)
    return SUCCESS, doc, text_construct(doc, F)


# ---------------------------------------------------------------------------
# verify

def load_duality(K, path):
    """A duality from a ``construct`` output or a bare serialized duality."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise InputError("no such file: %s" % path) from exc
    except (OSError, ValueError) as exc:
        raise InputError("cannot read duality file: %s" % exc) from exc
    d = doc.get("duality", doc) if isinstance(doc, dict) else None
    if not isinstance(d, dict) or "terms" not in d:
        raise InputError("duality file has no 'terms'")
    try:
        element = deserialize_coinner(K, d["terms"])
        mu = {K.index[c]: as_q(v) for c, v in d["mu"].items()}
        shift = int(d["shift"])
        J = int(d["max_degree"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError("malformed duality file: %s" % exc) from exc
    low = {k: v for k, v in element.items() if len(k[0]) == 2}
    return DualityElement(K, element, low, J, mu, shift)


def run_verify(K, N, coproduct, mu, F=None, mode="canonical", reference=True):
    D = construct_local_coalgebra(K, N, coproduct)
    checks = {}
    sq = verify_square_zero(D)
    checks["square-zero"] = {"pass": sq.ok, "residual_terms": sum(map(len, sq.residuals.values()))}
    loc = D.locality()
    checks["locality"] = {"pass": all(loc.values())}
    chi = construct_chi(K, D, max_degree=None if F is None else F.max_degree, mode=mode)
    res = {K.cells[c].id: len(chain_map_residual(chi, D, c)) for c in range(len(K))}
    checks["chi-chain-map"] = {"pass": not any(res.values()),
                               "residual_terms": sum(res.values())}
    checks["chi-locality"] = {"pass": chi.locality()}
    if F is None and mu is not None:
        F = build_duality(chi, mu)
    warnings = []
    if F is not None:
        rep = verify_duality(F, D)
        for name, c in rep.checks.items():
            checks["duality-" + name] = c
        warnings = list(rep.warnings)
    else:
        warnings.append("no fundamental cycle: duality checks skipped")
    # the coalgebra as a cobimodule over itself splits into minimal + contractible
    # word length 2 is cubic in the cell count; larger complexes use length 1
    n = min(2 if len(K) <= 20 else 1, N - 1)
    dec = decompose_cobimodule(cobimodule_from_coalgebra(D, n), n)
    dchecks = validate_decomposition(dec)
    betti = sum(h.betti for h in homology(K).degrees.values())
    checks["decomposition"] = {"pass": all(dchecks.values()) and len(dec.p_index) == betti,
                               "minimal_dim": len(dec.p_index), "letters": n,
                               "failed": sorted(k for k, v in dchecks.items() if not v)}
    if reference and K.name in ("point", "interval", "circle") and coproduct == "strict-aw":
        try:
            cmp = compare_to_reference(chi, D, K.name)
        except KeyError:
            cmp = None
        if cmp is not None:
            ok = all(v["match"] or v.get("exact_difference") for v in cmp.values())
            checks["reference-table"] = {"pass": ok, "cells": cmp}
    doc = {"command": "verify", "complex": K.name,
           "config": {"truncation": N, "coproduct": coproduct, "mode": mode,
                      "max_tensor_degree": chi.max_degree,
                      "mu": _ids(K, F.mu) if F is not None else None},
           "pass": all(c["pass"] for c in checks.values()),
           "checks": checks, "warnings": warnings}
    return doc


def text_report(title, doc):
    lines = ["%s: %s" % (title, "PASS" if doc["pass"] else "FAIL")]
    for name, c in doc["checks"].items():
        extra = ", ".join("%s=%s" % (k, v) for k, v in sorted(c.items())
                          if k not in ("pass", "cells", "ranks"))
        lines.append("  %-24s %s  %s" % (name, "ok" if c["pass"] else "FAILED", extra))
    for w in doc.get("warnings", []):
        lines.append("warning: " + w)
    return "\n".join(lines)


def cmd_verify(args):
    K = check_complex(args.input)
    N = check_truncation(args.max_tensor_degree)
    coproduct = check_coproduct(args.coproduct)
    F = load_duality(K, args.duality) if args.duality else None
    doc = run_verify(K, N, coproduct, _mu(K, args), F, args.mode)
    code = SUCCESS if doc["pass"] else VERIFY_FAILED
    return code, doc, text_report("verify %s (N=%d)" % (K.name, N), doc)


# ---------------------------------------------------------------------------
# hochschild

def cmd_hochschild(args):
    K = check_complex(args.input)
    A = check_truncation(args.arity_max, 2, "arity-max")
    coproduct = check_coproduct(args.coproduct)
    window = parse_window(args.window)
    if args.samples < 0:
        raise InputError("samples must be non-negative")
    mu = _mu(K, args)
    if mu is None:
        raise InputError("complex %s has no fundamental cycle; pass --mu" % K.name)
    D = construct_local_coalgebra(K, A + 2, coproduct)
    F = build_duality(construct_chi(K, D, A), mu)
    T, _ = transported_structure(K, D, F, A)
    rep = bv_check(T, window, A - 1, args.samples, args.seed)
    doc = {"command": "hochschild", "complex": K.name,
           "config": {"arity_max": A, "coproduct": coproduct, "seed": args.seed,
                      "samples": args.samples, "window": list(window), "mu": _ids(K, mu)},
           "counit_defects": [K.cells[c].id for c in T.alg.counit_defects()]}
    doc.update(rep.as_dict())
    return (SUCCESS if rep.ok else VERIFY_FAILED), doc, rep.text()


# ---------------------------------------------------------------------------
# bernoulli

def cmd_bernoulli(args):
    K = check_complex(args.input)
    N = check_truncation(args.max_tensor_degree)
    for cid in (args.edge, args.start, args.end):
        if cid not in K.index:
            raise InputError("unknown cell %r" % cid)
    S = construct_local_lie(K, N)
    rep = bernoulli_report(S, args.edge, args.start, args.end)
    doc = {"command": "bernoulli", "complex": K.name, "config": {"truncation": N},
           "locality": lie_locality(S), "square_zero_residuals": len(verify_lie_square_zero(S))}
    doc.update(rep.as_dict())
    ok = rep.square_zero and doc["locality"]
    return (SUCCESS if ok else VERIFY_FAILED), doc, rep.text()


# ---------------------------------------------------------------------------
# corpus

def run_corpus(names=FIXTURES, coproduct="strict-aw"):
    """``construct`` and ``verify`` on each shipped fixture; ``{name: document}``."""
    from .validation import fixture_path
    out = {}
    for name in names:
        K = check_complex(fixture_path(name))
        N = CORPUS_N.get(name, 4)
        mu = fundamental_cycle(K)
        built, _ = run_construct(K, N, coproduct, mu)
        out[name] = {"construct": built, "verify": run_verify(K, N, coproduct, mu)}
    return out


def cmd_corpus(args):
    names = args.fixtures.split(",") if args.fixtures else list(FIXTURES)
    for n in names:
        if n not in FIXTURES:
            raise InputError("unknown fixture %r" % n)
    coproduct = check_coproduct(args.coproduct)
    docs = run_corpus(names, coproduct)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for name, d in docs.items():
            with open(os.path.join(args.out_dir, name + ".json"), "w") as fh:
                fh.write(dumps(d))
    ok = all(d["verify"]["pass"] for d in docs.values())
    lines = ["%-10s %s" % (n, "ok" if d["verify"]["pass"] else "FAILED") for n, d in docs.items()]
    summary = {"command": "corpus", "pass": ok,
               "fixtures": {n: d["verify"]["pass"] for n, d in docs.items()}}
    return (SUCCESS if ok else VERIFY_FAILED), summary, "\n".join(lines)


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="localduality", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, input_default=None):
        sp.add_argument("--input", required=input_default is None, default=input_default,
                        help="complex JSON file or shipped fixture name")
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--json", action="store_true", help="print JSON instead of text")

    def structure(sp):
        sp.add_argument("--coproduct", default="strict-aw",
                        choices=("strict-aw", "symmetrized"))
        sp.add_argument("--mu", help="fundamental cycle as id=coeff,id=coeff")

    sp = sub.add_parser("construct", help="build D, chi and the duality")
    common(sp)
    structure(sp)
    sp.add_argument("--max-tensor-degree", type=int, default=6, help="truncation N")
    sp.add_argument("--mode", default="canonical", choices=("canonical", "sparse"))
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="check every invariant of the constructions")
    common(sp)
    structure(sp)
    sp.add_argument("--max-tensor-degree", type=int, default=6, help="truncation N")
    sp.add_argument("--mode", default="canonical", choices=("canonical", "sparse"))
    sp.add_argument("--duality", help="serialized duality to check instead of rebuilding it")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hochschild", help="BV identities on truncated cochains")
    common(sp)
    structure(sp)
    sp.add_argument("--arity-max", type=int, default=4)
    sp.add_argument("--window", default="-2:2", help="degree window lo:hi")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_hochschild)

    sp = sub.add_parser("bernoulli", help="Lie model coefficients against Bernoulli numbers")
    common(sp, input_default="interval")
    sp.add_argument("--max-tensor-degree", type=int, default=6, help="bracket length")
    sp.add_argument("--edge", default="sigma")
    sp.add_argument("--start", default="a")
    sp.add_argument("--end", default="b")
    sp.set_defaults(func=cmd_bernoulli)

    sp = sub.add_parser("corpus", help="construct and verify every shipped fixture")
    sp.add_argument("--out", dest="out_dir", help="directory for per-fixture JSON")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--fixtures", help="comma-separated subset")
    sp.add_argument("--coproduct", default="strict-aw", choices=("strict-aw", "symmetrized"))
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors, which is already the input-error code
        return exc.code if isinstance(exc.code, int) else INPUT_ERROR
    try:
        code, doc, text = args.func(args)
    except InputError as exc:
        sys.stderr.write(dumps({"error": "input-error", "message": str(exc)}))
        return INPUT_ERROR
    except Exception as exc:  # noqa: BLE001 - reported as a machine-readable diagnostic
        sys.stderr.write(dumps({"error": "internal-error", "type": type(exc).__name__,
                                "message": str(exc)}))
        return INTERNAL_ERROR
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(dumps(doc))
    sys.stdout.write(dumps(doc) if args.json else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
