"""Front end de línea de comandos para mseps.

Subcomandos:
- accelerate: tabla ε (motores rec/det/cross/linear) con estado por celda.
- oracle: valores de 𝓗_k, H_k o Φ_k.
- identities: barrido aleatorio de residuos de identidades.
- lv: red de Lotka-Volterra y residuos.
- kernel-gen: genera una sucesión del núcleo y la guarda.

Códigos de salida: 0 éxito, 1 breakdown con --strict (o residuos no nulos), 2 error de entrada/config.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

import pandas as pd

from mseps.constants import (
    BOUNDARY_PRINTED,
    BOUNDARY_SUBSTITUTED,
    DEFAULT_M,
    DEFAULT_MAX_K,
    DEFAULT_PRECISION_BITS,
    DEFAULT_SEED,
    DEFAULT_SWEEP_SEQUENCES,
    EXIT_BREAKDOWN,
    EXIT_CONFIG,
    EXIT_OK,
)
from mseps.determinants import extended_h, hankel, phi
from mseps.epsilon import CellStatus, EpsilonTable, cross_rule_table, multistep_epsilon
from mseps.errors import ConfigError, MsepsError
from mseps.identities import run_sweep
from mseps.lotka_volterra import (
    closed_form_lattice,
    lv_m1_u_check,
    lv_residuals,
    miura_from_epsilon,
)
from mseps.numerics import (
    RATIONAL,
    ScalarMode,
    SequencePrefix,
    difference_sequence,
    float_mode,
    format_scalar,
    parse_scalar,
)
from mseps.report import table_to_csv, table_to_frame, table_to_grid, table_to_json_text
from mseps.sequences import (
    KernelSpec,
    generate_kernel,
    is_builtin,
    load_sequence,
    parse_builtin,
    save_sequence,
)
from mseps.shanks import determinant_table, linear_table

logger = logging.getLogger(__name__)

COMMANDS = ("accelerate", "oracle", "identities", "lv", "kernel-gen")
ENGINES = ("rec", "det", "cross", "linear")
FORMATS = ("table", "csv", "json")
FAMILIES = ("hankel", "extended", "phi")


@dataclass
class RunConfig:
    command: str
    input: str = "ln2"
    m: int = DEFAULT_M
    max_k: int = DEFAULT_MAX_K
    mode: str = "rational"
    precision_bits: int = DEFAULT_PRECISION_BITS
    engine: str = "rec"
    format: str = "table"
    seed: int = DEFAULT_SEED
    length: Optional[int] = None
    limit: Optional[str] = None
    strict: bool = False
    # oracle
    family: str = "extended"
    k: int = 2
    n: int = 0
    shift: int = 0
    # identities
    sequences: int = DEFAULT_SWEEP_SEQUENCES
    # lv
    boundary: str = BOUNDARY_PRINTED
    # kernel-gen
    coefficients: str = ""
    kernel_limit: str = "0"
    seeds: str = ""
    out: Optional[str] = None


def validate(config: RunConfig) -> None:
    if config.command not in COMMANDS:
        raise ConfigError(f"unknown command {config.command!r}")
    if config.m < 1:
        raise ConfigError("m must be a positive integer")
    if config.max_k < 0:
        raise ConfigError("max_k must be nonnegative")
    if config.mode not in ("rational", "float"):
        raise ConfigError(f"unknown mode {config.mode!r}")
    if config.mode == "float" and config.precision_bits < 53:
        raise ConfigError("precision_bits must be >= 53")
    if config.engine not in ENGINES:
        raise ConfigError(f"unknown engine {config.engine!r}")
    if config.engine == "cross" and config.m != 1:
        raise ConfigError("cross rule requires m=1")
    if config.format not in FORMATS:
        raise ConfigError(f"unknown format {config.format!r}")
    if config.length is not None and config.length < 2:
        raise ConfigError("length must be >= 2")
    if config.boundary not in (BOUNDARY_PRINTED, BOUNDARY_SUBSTITUTED):
        raise ConfigError(f"unknown boundary {config.boundary!r}")


def scalar_mode(config: RunConfig) -> ScalarMode:
    return RATIONAL if config.mode == "rational" else float_mode(config.precision_bits)


def load_input(config: RunConfig, mode: ScalarMode) -> SequencePrefix:
    """Builtin series name or path to a CSV/JSON file."""
    if is_builtin(config.input):
        length = config.length or config.max_k + 1
        return parse_builtin(config.input, length, mode)
    path = Path(config.input)
    if not path.exists():
        raise ConfigError(f"input not found: {path}")
    seq = load_sequence(path, precision_bits=config.precision_bits)
    if mode.is_rational and not seq.mode.is_rational:
        raise ConfigError("rational mode rejects non-rational input values")
    if config.length is not None:
        seq = seq.truncated(config.length)
    return seq if seq.mode == mode else seq.with_mode(mode)


def _emit_frame(frame: pd.DataFrame, fmt: str, out: TextIO) -> None:
    if fmt == "csv":
        out.write(frame.to_csv(index=False))
    elif fmt == "json":
        out.write(frame.to_json(orient="records", indent=2))
        out.write("\n")
    else:
        out.write(frame.to_string(index=False))
        out.write("\n")


def build_table(config: RunConfig, seq: SequencePrefix) -> EpsilonTable:
    if config.engine == "rec":
        return multistep_epsilon(seq, config.m, max_k=config.max_k)
    if config.engine == "det":
        return determinant_table(seq, config.m, config.max_k)
    if config.engine == "cross":
        return cross_rule_table(seq, max_k=config.max_k)
    return linear_table(seq, config.m, config.max_k)


def cmd_accelerate(config: RunConfig, out: TextIO, err: TextIO) -> int:
    mode = scalar_mode(config)
    seq = load_input(config, mode)
    print(f"[INFO] {seq.label or config.input}: {len(seq)} términos, modo {mode}, motor {config.engine}, m={config.m}", file=err)
    table = build_table(config, seq)
    limit = parse_scalar(config.limit, mode) if config.limit is not None else None
    if config.format == "csv":
        out.write(table_to_csv(table, config.max_k, limit))
    elif config.format == "json":
        out.write(table_to_json_text(table, config.max_k, limit))
        out.write("\n")
    else:
        out.write(table_to_grid(table, config.max_k).to_string())
        out.write("\n")
        if limit is not None:
            errors = table_to_frame(table, config.max_k, limit)
            errors = errors[errors["error"] != ""]
            out.write("\n")
            out.write(errors.to_string(index=False))
            out.write("\n")
    broken = table.breakdowns(config.max_k)
    if broken:
        print(f"[WARN] {len(broken)} celdas con breakdown (primera en k={broken[0][0]}, n={broken[0][1]})", file=err)
        if config.strict:
            return EXIT_BREAKDOWN
    return EXIT_OK


def cmd_oracle(config: RunConfig, out: TextIO, err: TextIO) -> int:
    mode = scalar_mode(config)
    seq = load_input(config, mode)
    if config.family not in FAMILIES:
        raise ConfigError(f"unknown determinant family {config.family!r}")
    u = difference_sequence(seq, config.shift)
    rows: List[Dict[str, Any]] = []
    for k in range(config.k + 1):
        if config.family == "hankel":
            value = hankel(u, config.n, k)
        elif config.family == "extended":
            value = extended_h(u, config.n, k, config.m)
        else:
            value = phi(u, config.n, k, config.m)
        rows.append(
            {
                "family": config.family,
                "k": k,
                "n": config.n,
                "m": config.m,
                "shift": config.shift,
                "value": format_scalar(value, mode),
            }
        )
    _emit_frame(pd.DataFrame(rows), config.format, out)
    return EXIT_OK


def cmd_identities(config: RunConfig, out: TextIO, err: TextIO) -> int:
    mode = scalar_mode(config)
    print(f"[INFO] Barrido de identidades: seed={config.seed}, m={config.m}, {config.sequences} sucesiones", file=err)
    summary = run_sweep(
        seed=config.seed,
        sequences=config.sequences,
        ms=(config.m,),
        sylvester_matrices=20,
        mode=mode,
    )
    _emit_frame(summary.to_frame(), config.format, out)
    if summary.all_zero:
        if config.format == "table":
            out.write(f"all residuals zero ({summary.total_cases} cases)\n")
        print("[OK] all residuals zero", file=err)
        return EXIT_OK
    failing = [s.identity_id for s in summary.stats.values() if s.failures]
    print(f"[WARN] residuos no nulos en: {', '.join(failing)}", file=err)
    return EXIT_BREAKDOWN


def cmd_lv(config: RunConfig, out: TextIO, err: TextIO) -> int:
    mode = scalar_mode(config)
    seq = load_input(config, mode)
    table = multistep_epsilon(seq, config.m)
    lattice = miura_from_epsilon(table, config.boundary)
    closed = closed_form_lattice(seq, config.m, config.boundary)
    mismatched = [
        site
        for site, cell in lattice.entries.items()
        if cell.is_valid and closed.entries.get(site) is not None and closed.entries[site].is_valid
        and closed.entries[site].value != cell.value
    ]
    report = lv_residuals(lattice)
    if config.format == "json":
        payload = {
            "m": config.m,
            "boundary": config.boundary,
            "entries": json.loads(lattice.to_frame().to_json(orient="records")),
            "residuals": json.loads(report.to_frame().to_json(orient="records")),
        }
        out.write(json.dumps(payload, indent=2))
        out.write("\n")
    else:
        _emit_frame(lattice.to_frame(), config.format, out)
        if config.format == "table":
            out.write("\n")
            _emit_frame(report.to_frame(), config.format, out)
    interior_bad = report.nonzero()
    print(
        f"[INFO] {len(report.interior)} sitios interiores, {len(report.edge)} de borde, "
        f"{len(report.skipped)} omitidos; {len(interior_bad)} residuos interiores no nulos",
        file=err,
    )
    if report.edge and not report.all_zero(include_edge=True):
        print(f"[WARN] residuos de borde no nulos con frontera '{config.boundary}'", file=err)
    if mismatched and mode.is_rational:
        print(f"[WARN] forma cerrada y Miura difieren en {len(mismatched)} sitios", file=err)
    if config.m == 1:
        try:
            gauge = lv_m1_u_check(lattice)
            print(f"[INFO] variables u: {len(gauge.residuals)} residuos, todos nulos={gauge.all_zero(mode)}", file=err)
        except MsepsError as exc:
            print(f"[WARN] {exc}", file=err)
    breakdowns = [site for site, cell in lattice.entries.items() if cell.status is CellStatus.BREAKDOWN]
    if config.strict and (breakdowns or interior_bad):
        return EXIT_BREAKDOWN
    return EXIT_OK


def _split(text: str, mode: ScalarMode) -> List[Any]:
    return [parse_scalar(t, mode) for t in text.split(",") if t.strip()]


def cmd_kernel_gen(config: RunConfig, out: TextIO, err: TextIO) -> int:
    mode = scalar_mode(config)
    coefficients = _split(config.coefficients, mode)
    if not coefficients:
        raise ConfigError("kernel-gen needs --coefficients a1,...,ak")
    k = len(coefficients)
    spec = KernelSpec(
        m=config.m,
        k=k,
        coefficients=tuple(coefficients),
        limit=parse_scalar(config.kernel_limit, mode),
        seeds=tuple(_split(config.seeds, mode)),
        mode=mode,
    )
    length = config.length or 2 * (config.m + 1) * k + 1
    seq = generate_kernel(spec, length)
    if config.out:
        path = save_sequence(seq, config.out)
        print(f"[OK] Guardada sucesión del núcleo en {path}", file=err)
    else:
        out.writelines(f"{format_scalar(t, mode)}\n" for t in seq.terms)
    return EXIT_OK


HANDLERS = {
    "accelerate": cmd_accelerate,
    "oracle": cmd_oracle,
    "identities": cmd_identities,
    "lv": cmd_lv,
    "kernel-gen": cmd_kernel_gen,
}


def run(config: RunConfig, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        validate(config)
        return HANDLERS[config.command](config, out, err)
    except (MsepsError, OSError) as exc:
        print(f"[ERROR] {exc}", file=err)
        return EXIT_CONFIG


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default="ln2", help="Serie integrada (ln2, geometric:S,c,lambda, power:x,c0,...) o ruta CSV/JSON")
    common.add_argument("--m", type=int, default=DEFAULT_M, help="Paso del algoritmo multipaso")
    common.add_argument("--max-k", type=int, default=DEFAULT_MAX_K, help="Columna máxima de la tabla")
    common.add_argument("--mode", choices=("rational", "float"), default="rational")
    common.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION_BITS)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--length", type=int, help="Número de términos (por defecto max-k + 1)")
    common.add_argument("--strict", action="store_true", help="Código 1 si hay breakdown en las celdas pedidas")
    common.add_argument("--verbose", action="store_true", help="Logging DEBUG")

    parser = argparse.ArgumentParser(
        prog="mseps",
        description="Aceleración de convergencia: Shanks, ε de Wynn y ε multipaso con oráculo de determinantes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    acc = sub.add_parser("accelerate", parents=[common], help="Tabla ε de una sucesión")
    acc.add_argument("--engine", choices=ENGINES, default="rec")
    acc.add_argument("--limit", help="Límite conocido para la columna de error")

    ora = sub.add_parser("oracle", parents=[common], help="Valores de determinantes")
    ora.add_argument("--family", choices=FAMILIES, default="extended")
    ora.add_argument("--k", type=int, default=2, help="Orden máximo k")
    ora.add_argument("--n", type=int, default=0)
    ora.add_argument("--shift", type=int, default=0, help="Usa Δ^shift S como sucesión u")

    ide = sub.add_parser("identities", parents=[common], help="Barrido de residuos de identidades")
    ide.add_argument("--sequences", type=int, default=DEFAULT_SWEEP_SEQUENCES)

    lv = sub.add_parser("lv", parents=[common], help="Red de Lotka-Volterra y residuos")
    lv.add_argument("--boundary", choices=(BOUNDARY_PRINTED, BOUNDARY_SUBSTITUTED), default=BOUNDARY_PRINTED)

    ker = sub.add_parser("kernel-gen", parents=[common], help="Genera una sucesión del núcleo")
    ker.add_argument("--coefficients", required=True, help="a1,...,ak (a_k != 0)")
    ker.add_argument("--limit", dest="kernel_limit", default="0", help="Límite S")
    ker.add_argument("--seeds", default="", help="S_0,...,S_{km-1}")
    ker.add_argument("--out", help="Archivo destino (.csv o .json)")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    values = {name: getattr(ns, name) for name in fields if hasattr(ns, name)}
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if ns.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
