"""JSON command-line front end.

Exit codes: 0 on success, 1 on a domain error (JSON error object on stdout),
2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import acceptance
from .embedding import (
    Embedding,
    embed_point,
    embedding_from_kernel,
    kernel_coefficients,
    kernel_eval,
    norm_of,
)
from .errors import PickDirichletError, ShapeError
from .families import FamilyId, family_coefficients, prime_embedding
from .independence import dependence_witness, multiplicative_rank
from .pick import KernelSpec, alpha_coefficients, check_complete_pick, growth_certificate
from .series import DirichletSeries, Mode, convolve, format_scalar, invert
from .spectra import kernel_matrix, mcq_test, pick_feasibility

DEFAULT_DEPTH = 1000
DEPTH_ENV = "PICKDIRICHLET_DEPTH"


class InputError(Exception):
    """Malformed command-line input (exit code 2)."""


@dataclass
class RunConfig:
    """Settings shared by every subcommand.

    ``tol=None`` leaves each operation on its own default, which is 1e-9
    relative to the magnitude of the object being tested.
    """

    depth: int = DEFAULT_DEPTH
    mode: Optional[Mode] = None
    tol: Optional[float] = None
    seed: int = 0
    output: Optional[Path] = None
    pretty: bool = False

    def __post_init__(self):
        if self.depth < 1:
            raise InputError(f"depth must be >= 1, got {self.depth}")
        if self.tol is not None and not self.tol > 0:
            raise InputError(f"tol must be positive, got {self.tol}")


def default_depth() -> int:
    raw = os.environ.get(DEPTH_ENV)
    if raw is None:
        return DEFAULT_DEPTH
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{DEPTH_ENV}={raw!r} is not an integer") from None


# --------------------------------------------------------------------------
# parsing helpers


def parse_complex(value) -> complex:
    """``"a+bi"``, ``"a+bj"``, ``[re, im]`` or a plain number."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InputError(f"complex pair must have two entries, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise InputError(f"cannot parse {value!r} as a complex number")


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


def read_json(path) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def read_points(path) -> list[complex]:
    data = read_json(path)
    if isinstance(data, dict):
        data = data.get("points")
    if not isinstance(data, list) or not data:
        raise InputError("points file must hold a non-empty list")
    return [parse_complex(p) for p in data]


def read_targets(path) -> list[np.ndarray]:
    data = read_json(path)
    if isinstance(data, dict):
        data = data.get("targets")
    if not isinstance(data, list) or not data:
        raise InputError("targets file must hold a non-empty list")
    out = []
    for W in data:
        # a list of rows is a matrix; anything else is a scalar (1x1) target
        if isinstance(W, list) and W and isinstance(W[0], list):
            out.append(np.array([[parse_complex(x) for x in row] for row in W]))
        else:
            out.append(np.array([[parse_complex(W)]]))
    return out


def encode(obj):
    """Turn library values into JSON-ready data (complex as ``[re, im]``)."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, Fraction):
        return format_scalar(obj)
    return obj


def render_pretty(obj, prefix: str = "") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            key = f"{prefix}.{k}" if prefix else str(k)
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.extend(render_pretty(v, key))
            else:
                lines.append(f"{key:<28} {_cell(v)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            lines.extend(render_pretty(v, f"{prefix}[{i}]"))
    else:
        lines.append(f"{prefix:<28} {_cell(obj)}")
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat(x) for x in v) and len(v) <= 12


def _cell(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_cell(x) for x in v) + "]"
    if isinstance(v, float):
        return f"{v:.12g}"
    return json.dumps(v) if not isinstance(v, str) else v


def emit(cfg: RunConfig, payload) -> None:
    data = encode(payload)
    if cfg.pretty:
        text = "\n".join(render_pretty(data))
    else:
        text = json.dumps(data, separators=(",", ":"))
    if cfg.output is not None:
        cfg.output.write_text(text + "\n")
        print(json.dumps({"output": str(cfg.output)}))
    else:
        print(text)


# --------------------------------------------------------------------------
# loading kernels and embeddings


def _family_mode(family: FamilyId, cfg: RunConfig) -> Mode:
    if cfg.mode is not None:
        return cfg.mode
    # rational where the coefficients are rational
    if family in (FamilyId.ZETA_RECIPROCAL, FamilyId.ZETA_SQUAREFREE):
        return Mode.EXACT_RATIONAL
    return Mode.REAL64


def load_family(name: str, cfg: RunConfig) -> KernelSpec:
    try:
        family = FamilyId.parse(name)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return family_coefficients(family, cfg.depth, _family_mode(family, cfg))


def load_series(path, cfg: RunConfig, truncate: bool = False) -> DirichletSeries:
    data = read_json(path)
    if not isinstance(data, dict) or "coeffs" not in data:
        raise InputError(f"{path} is not a series file")
    try:
        series = DirichletSeries.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PickDirichletError):
            raise
        raise InputError(f"bad series in {path}: {exc}") from None
    if cfg.mode is not None:
        series = series.as_mode(cfg.mode)
    if truncate and cfg.depth < series.N:
        series = series.truncate(cfg.depth)
    return series


def _is_embedding_json(data) -> bool:
    return isinstance(data, dict) and "n" in data and ("b" in data or "b2" in data)


def load_embedding(path) -> Embedding:
    data = read_json(path)
    if not _is_embedding_json(data):
        raise InputError(f"{path} is not an embedding file")
    try:
        return Embedding.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad embedding in {path}: {exc}") from None


def load_kernel_spec(args, cfg: RunConfig) -> KernelSpec:
    if getattr(args, "family", None):
        return load_family(args.family, cfg)
    if getattr(args, "series", None):
        return KernelSpec(load_series(args.series, cfg, truncate=args.depth is not None))
    if getattr(args, "kernel", None):
        data = read_json(args.kernel)
        if _is_embedding_json(data):
            return kernel_coefficients(Embedding.from_json(data), cfg.depth)
        try:
            spec = KernelSpec.from_json(data)
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad kernel in {args.kernel}: {exc}") from None
        if args.depth is not None and args.depth < spec.depth:
            spec = spec.truncate(args.depth)
        return spec
    raise InputError("give one of --family, --kernel or --series")


def load_kernel(args, cfg: RunConfig):
    """KernelSpec or Embedding, whichever the input describes."""
    if getattr(args, "kernel", None):
        data = read_json(args.kernel)
        if _is_embedding_json(data):
            return Embedding.from_json(data)
    return load_kernel_spec(args, cfg)


def load_embedding_arg(args) -> Embedding:
    if args.spec:
        return load_embedding(args.spec)
    return prime_embedding()


# --------------------------------------------------------------------------
# commands


def cmd_series(args, cfg: RunConfig):
    if args.action == "invert":
        return invert(load_series(args.input, cfg, truncate=args.depth is not None)).to_json()
    if not args.b:
        raise InputError("series convolve needs --a and --b")
    a = load_series(args.input, cfg, truncate=args.depth is not None)
    b = load_series(args.b, cfg, truncate=args.depth is not None)
    return convolve(a, b).to_json()


def cmd_pick(args, cfg: RunConfig):
    spec = load_kernel_spec(args, cfg)
    if args.action == "check":
        return check_complete_pick(spec, cfg.tol).to_json()
    if args.action == "alpha":
        return alpha_coefficients(spec).to_json()
    n_max = args.n_max if args.n_max is not None else min(20, spec.depth)
    return growth_certificate(spec, n_max, args.k_max, cfg.tol).to_json()


def cmd_family(args, cfg: RunConfig):
    return load_family(args.id, cfg).to_json()


def cmd_embed(args, cfg: RunConfig):
    if args.action == "eval":
        if not args.point:
            raise InputError("embed eval needs --point")
        E = load_embedding_arg(args)
        s = parse_complex(args.point)
        u = parse_complex(args.u) if args.u else s
        ev = embed_point(E, s)
        kv = kernel_eval(E, s, u)
        out = {"s": s, "norm_sq": ev.norm_sq, "tail_norm_bound": ev.tail_norm_bound}
        if E.K <= 64:
            out["f"] = ev.vector
        out.update({"u": u, "kernel": kv.value, "kernel_error": kv.error})
        return out
    if args.action == "coeffs":
        return kernel_coefficients(load_embedding_arg(args), cfg.depth).to_json()
    if args.action == "norm":
        if not args.series:
            raise InputError("embed norm needs --series")
        E = load_embedding_arg(args)
        gamma = load_series(args.series, cfg)
        return {"norm_sq": norm_of(E, gamma)}
    # from-kernel
    return embedding_from_kernel(load_kernel_spec(args, cfg), cfg.tol).to_json()


def cmd_indep(args, cfg: RunConfig):
    n_list = parse_int_list(args.n)
    b = parse_float_list(args.b) if args.b else None
    rank, mat = multiplicative_rank(n_list)
    witness = dependence_witness(n_list, b) if (args.action == "witness" or args.witness) else None
    if args.action == "rank":
        return {"rank": rank, "exponent_matrix": mat.to_json()}
    if args.action == "witness":
        return {"independent": rank == len(n_list), "witness": witness.to_json() if witness else None}
    out = {"independent": rank == len(n_list), "rank": rank}
    if args.witness and witness is not None:
        Path(args.witness).write_text(json.dumps(encode(witness.to_json()), separators=(",", ":")) + "\n")
        out["witness_file"] = args.witness
    return out


def _point_sets(args, cfg: RunConfig) -> list[list[complex]]:
    if args.points:
        return [read_points(args.points)]
    if not args.random:
        raise InputError("give --points or --random")
    rng = np.random.default_rng(cfg.seed)
    lo, hi = args.re_range
    sets = []
    for _ in range(args.random):
        m = int(rng.integers(args.size[0], args.size[1] + 1))
        sets.append(list(rng.uniform(lo, hi, m) + 1j * rng.uniform(-args.im, args.im, m)))
    return sets


def cmd_mcq(args, cfg: RunConfig):
    kernel = load_kernel(args, cfg)
    results = []
    for pts in _point_sets(args, cfg):
        passes, inertia = mcq_test(kernel, pts, cfg.tol)
        results.append({"one_positive": passes, "inertia": inertia.to_json()})
    if args.points:
        return results[0]
    return {"sets": len(results), "all_pass": all(r["one_positive"] for r in results), "results": results}


def cmd_pickfeas(args, cfg: RunConfig):
    kernel = load_kernel(args, cfg)
    pts = read_points(args.points)
    targets = read_targets(args.targets)
    if len(targets) != len(pts):
        raise InputError(f"{len(pts)} points but {len(targets)} targets")
    feasible, lam = pick_feasibility(kernel, pts, targets, cfg.tol)
    out = {"feasible": feasible, "min_eigenvalue": lam}
    if args.matrix:
        out["kernel_matrix"] = kernel_matrix(kernel, pts)[0]
    return out


def cmd_verify(args, cfg: RunConfig):
    only = set(parse_int_list(args.only)) if args.only else None
    results = acceptance.run_all(cfg.seed, only)
    for r in results:
        print(r.line(), file=sys.stderr)
    payload = {
        "passed": all(r.passed for r in results),
        "checks": [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
    }
    return payload


COMMANDS = {
    "series": cmd_series,
    "pick": cmd_pick,
    "family": cmd_family,
    "embed": cmd_embed,
    "indep": cmd_indep,
    "mcq": cmd_mcq,
    "pickfeas": cmd_pickfeas,
    "verify": cmd_verify,
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--depth", type=int, help=f"truncation depth (default {DEFAULT_DEPTH} or ${DEPTH_ENV})")
    p.add_argument("--mode", choices=[m.value for m in Mode])
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "--output", dest="output", help="write JSON here instead of stdout")
    p.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")


def _kernel_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="zeta1, zeta2, zeta3 or prime")
    p.add_argument("--kernel", help="kernel spec or embedding JSON")
    p.add_argument("--series", help="series JSON of kernel coefficients a_n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pickdirichlet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="Dirichlet series arithmetic")
    p.add_argument("action", choices=["convolve", "invert"])
    p.add_argument("--in", "--a", dest="input", required=True)
    p.add_argument("--b")
    _common(p)

    p = sub.add_parser("pick", help="complete Pick coefficient test")
    p.add_argument("action", choices=["check", "alpha", "growth"])
    _kernel_source(p)
    p.add_argument("--n-max", type=int)
    p.add_argument("--k-max", type=int)
    _common(p)

    p = sub.add_parser("family", help="coefficients of a built-in kernel family")
    p.add_argument("--id", required=True)
    _common(p)

    p = sub.add_parser("embed", help="ball embeddings")
    p.add_argument("action", choices=["eval", "coeffs", "norm", "from-kernel"])
    p.add_argument("--spec", help="embedding JSON (default: the prime embedding)")
    p.add_argument("--point")
    p.add_argument("--u", help="second point for the kernel value (default: --point)")
    _kernel_source(p)
    _common(p)

    p = sub.add_parser("indep", help="multiplicative independence")
    p.add_argument("action", choices=["check", "rank", "witness"])
    p.add_argument("--n", required=True, help="comma-separated generators")
    p.add_argument("--b", help="comma-separated weights for the witness polynomial")
    p.add_argument("--witness", help="write the witness JSON to this file")
    _common(p)

    for name, help_text in [("mcq", "one-positive-eigenvalue test"), ("pickfeas", "Pick interpolation feasibility")]:
        p = sub.add_parser(name, help=help_text)
        _kernel_source(p)
        p.add_argument("--points")
        if name == "mcq":
            p.add_argument("--random", type=int, help="number of random point sets (uses --seed)")
            p.add_argument("--size", type=int, nargs=2, default=[2, 10], metavar=("MIN", "MAX"))
            p.add_argument("--re-range", type=float, nargs=2, default=[0.1, 3.0], metavar=("LO", "HI"))
            p.add_argument("--im", type=float, default=5.0, help="imaginary parts drawn from [-IM, IM]")
        else:
            p.add_argument("--targets", required=True)
            p.add_argument("--matrix", action="store_true", help="include the kernel matrix")
        _common(p)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated check numbers")
    _common(p)
    return parser


def _error(kind: str, message: str) -> str:
    return json.dumps({"error": {"type": kind, "message": message}})


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad flags
    try:
        depth = args.depth if args.depth is not None else default_depth()
        cfg = RunConfig(
            depth=depth,
            mode=Mode.parse(args.mode) if args.mode else None,
            tol=args.tol,
            seed=args.seed,
            output=Path(args.output) if args.output else None,
            pretty=args.pretty,
        )
        payload = COMMANDS[args.command](args, cfg)
    except (InputError, ShapeError) as exc:
        print(_error(type(exc).__name__, str(exc)))
        return 2
    except PickDirichletError as exc:
        print(_error(type(exc).__name__, str(exc)))
        return 1
    except (ValueError, KeyError, TypeError) as exc:
        # anything the library rejects before reaching the mathematics
        print(_error("InputError", str(exc)))
        return 2
    emit(cfg, payload)
    if args.command == "verify" and not payload["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
