"""Command-line front end: deterministic reports over manifold files.

Exit codes: 0 success, 1 I/O or parse failure, 2 validation failure,
3 theorem-hypothesis failure.  All output is canonically ordered and
timestamp-free so identical inputs give identical bytes.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from . import classes as cls
from .classes import HypersurfaceModel, ManifoldModel
from .decomp import (
    DecompositionError,
    enumerate_S,
    gt_from_ru,
    tau,
)
from .initialdata import DataClass, is_proper
from .k3 import (
    K3Error,
    PeriodPoint,
    build_k3_lattice,
    kahler_chamber_check,
    picard_signature_check,
    pic_membership_certificate,
)
from .knownvalues import KnownValueError
from .lattice import (
    LatticeError,
    e8_lattice,
    enumerate_square_classes,
    pairing,
)
from .manifest import (
    ManifestError,
    format_rational,
    load_data_file,
    load_manifold,
    parse_class_spec,
    parse_rational,
)
from .rimtori import RimError, rim_rank, rim_torsion

EXIT_PARSE = 1
EXIT_VALIDATION = 2
EXIT_HYPOTHESIS = 3


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    """Map exception families onto the documented exit codes."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ManifestError as exc:
            _fail(EXIT_PARSE, str(exc))
        except KnownValueError as exc:
            _fail(EXIT_HYPOTHESIS, str(exc))
        except DecompositionError as exc:
            code = (
                EXIT_HYPOTHESIS
                if str(exc).startswith("hypothesis failed")
                else EXIT_VALIDATION
            )
            _fail(code, str(exc))
        except (LatticeError, cls.ClassError, K3Error, RimError, ValueError) as exc:
            _fail(EXIT_VALIDATION, str(exc))
        except OSError as exc:
            _fail(EXIT_PARSE, str(exc))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(report, sort_keys=True, indent=2))
        return
    for key, value in report.items():
        if isinstance(value, list) and any(isinstance(x, (list, dict)) for x in value):
            click.echo(f"{key}:")
            for item in value:
                click.echo(f"  - {item}")
        else:
            click.echo(f"{key}: {value}")


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


@click.group()
def main() -> None:
    """Exact calculator for relative curve-count invariants."""


@main.command()
@click.option("--manifold", "manifold_path", required=True, type=str)
@click.option("--class", "class_spec", required=True, type=str)
@click.option("--data", "data_path", type=str, default=None)
@click.option("--per-mode", type=click.Choice(["literal", "unit"]), default="unit",
              show_default=True, help="Headline Per convention for the GT value.")
@click.option("--max-mult", type=int, default=16, show_default=True,
              help="Cap on square-0 multiplicities in the decomposition search.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_guarded
def invariant(manifold_path, class_spec, data_path, per_mode, max_mult, fmt):
    """Numerical invariants, predicates and GT values for one class."""
    doc = load_manifold(manifold_path)
    M, V = doc.manifold, doc.hypersurface
    A = parse_class_spec(M.lattice, class_spec)
    d_A = cls.d_of(M, A)
    report = {
        "name": M.name,
        "class": list(A.coords),
        "d_A": format_rational(d_A),
        "genus": cls.genus_of(M, A),
        "square": int(pairing(M.lattice, A, A)),
        "toroidal": _yesno(cls.is_toroidal(M, A)),
        "multiply_toroidal": _yesno(cls.is_multiply_toroidal(M, A)),
        "exceptional": _yesno(cls.is_exceptional(M, A)),
    }
    if V is not None:
        report["l_A"] = cls.l_of(M, V, A)
        report["stable_hypersurface"] = _yesno(cls.is_stable(M, V))
        report["small_class"] = _yesno(cls.is_small(M, V, A))

    data = load_data_file(data_path) if data_path else None
    improper = False
    if data is not None:
        if V is None:
            raise ManifestError("initial data given but the manifold file has no hypersurface")
        verdict = is_proper(M, V, A, data)
        report["proper"] = _yesno(bool(verdict))
        if not verdict:
            improper = True
            report["properness_failures"] = list(verdict.failures)

    if data is not None and not improper and V is not None and doc.table.support:
        values = {
            mode: gt_from_ru(M, V, A, data, doc.table, mode=mode, max_multiplicity=max_mult)
            for mode in ("unit", "literal", "direct")
        }
        for mode in ("unit", "literal", "direct"):
            report[f"GT_{mode}"] = format_rational(values[mode])
        report["GT"] = format_rational(values[per_mode])
        report["per_mode"] = per_mode
        report["per_mode_discrepancy"] = _yesno(values["literal"] != values["unit"])

    _emit(report, fmt)
    if improper:
        sys.exit(EXIT_VALIDATION)


@main.command()
@click.option("--manifold", "manifold_path", required=True, type=str)
@click.option("--class", "class_spec", required=True, type=str)
@click.option("--support", "support_spec", default="table", show_default=True,
              help="Semicolon-separated class specs, or 'table' for table support.")
@click.option("--max-mult", type=int, default=16, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_guarded
def decompose(manifold_path, class_spec, support_spec, max_mult, fmt):
    """List the admissible decompositions S(A) with their tau split."""
    doc = load_manifold(manifold_path)
    M = doc.manifold
    A = parse_class_spec(M.lattice, class_spec)
    if support_spec == "table":
        support = doc.table.support
    else:
        support = [
            parse_class_spec(M.lattice, s.strip())
            for s in support_spec.split(";")
            if s.strip()
        ]
    decomps = enumerate_S(M, A, support, max_multiplicity=max_mult)
    entries = []
    for y in decomps:
        tau_pairs, non_tau = tau(M, y)
        sym = Fraction(1)
        for _, mult in y.pairs:
            den = 1
            for i in range(2, mult + 1):
                den *= i
            sym /= den
        entries.append(
            {
                "pairs": [[list(c.coords), mult] for c, mult in y.pairs],
                "tau": [[list(c.coords), mult] for c, mult in tau_pairs],
                "non_tau": [[list(c.coords), mult] for c, mult in non_tau],
                "symmetry_factor": format_rational(sym),
            }
        )
    report = {
        "class": list(A.coords),
        "support_size": len(support),
        "count": len(decomps),
        "decompositions": entries,
    }
    if fmt == "json":
        click.echo(json.dumps(report, sort_keys=True, indent=2))
    else:
        click.echo(f"class: {report['class']}")
        click.echo(f"support_size: {report['support_size']}")
        click.echo(f"count: {report['count']}")
        for i, entry in enumerate(entries):
            click.echo(f"decomposition {i + 1}:")
            click.echo(f"  pairs: {entry['pairs']}")
            click.echo(f"  tau: {entry['tau']}")
            click.echo(f"  non_tau: {entry['non_tau']}")
            click.echo(f"  symmetry_factor: {entry['symmetry_factor']}")


@main.group()
def k3() -> None:
    """K3 lattice tooling."""


@k3.command()
@click.option("--sublattice", type=click.Choice(["mE8", "E8"]), default="mE8",
              show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_guarded
def roots(sublattice, fmt):
    """Count the roots of an E8 factor (square -2 in -E8, +2 in E8)."""
    if sublattice == "mE8":
        L = e8_lattice(negated=True)
        target = -2
    else:
        L = e8_lattice()
        target = 2
    count = len(enumerate_square_classes(L, target))
    _emit({"sublattice": sublattice, "square": target, "roots": count}, fmt)


def _parse_rational_vector(text: str, rank: int) -> list[Fraction]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != rank:
        raise ManifestError(f"vector has {len(parts)} entries, expected {rank}")
    return [parse_rational(p if "/" in p else int(p)) for p in parts]


@k3.command("kahler-check")
@click.option("--kappa", required=True, type=str, help="22 comma-separated rationals.")
@click.option("--re", "re_text", required=True, type=str)
@click.option("--im", "im_text", required=True, type=str)
@click.option("--bound", type=int, default=3, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_guarded
def kahler_check(kappa, re_text, im_text, bound, fmt):
    """Search for a root orthogonal to the period plane and kappa."""
    L = build_k3_lattice()
    kv = _parse_rational_vector(kappa, L.rank)
    U = PeriodPoint(
        _parse_rational_vector(re_text, L.rank),
        _parse_rational_vector(im_text, L.rank),
    )
    result = kahler_chamber_check(kv, U, bound, L)
    report = {"status": result.status, "bound": result.bound, "result": str(result)}
    if result.witness is not None:
        report["witness"] = list(result.witness.coords)
    if result.reason:
        report["reason"] = result.reason
    _emit(report, fmt)


@k3.command()
@click.option("--basis", required=True, type=str,
              help="Semicolon-separated class specs over the K3 lattice.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_guarded
def picard(basis, fmt):
    """Signature check for a candidate Picard sublattice."""
    L = build_k3_lattice()
    vectors = [
        parse_class_spec(L, s.strip()) for s in basis.split(";") if s.strip()
    ]
    ok, r, moduli_dim = picard_signature_check(L, vectors)
    report = {
        "ok": _yesno(ok),
        "rank": r,
        "signature": f"(1,{r - 1})" if ok else "not (1,r-1)",
        "moduli_dim": moduli_dim,
        "certificates": [str(pic_membership_certificate(L, v)) for v in vectors],
    }
    _emit(report, fmt)


@main.command()
@click.option("--manifold", "manifold_path", required=True, type=str)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_guarded
def rimtori(manifold_path, fmt):
    """Rim-tori rank and torsion from the manifold file's presentation."""
    doc = load_manifold(manifold_path)
    if doc.rim is None:
        raise ManifestError("manifold file has no 'rim' object")
    report = {
        "h1v_rank": doc.rim.h1v_rank,
        "rim_rank": rim_rank(doc.rim),
        "torsion": rim_torsion(doc.rim),
    }
    _emit(report, fmt)


if __name__ == "__main__":
    main()
