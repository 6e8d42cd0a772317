"""Exact modular character computations: integral linear algebra, the
all-integer cutting plane solver, basic set checks and the `moc` command."""

from ._core import (
    MocError,
    Table,
    brute_force_ilp,
    certify_pair,
    dec_solve,
    det,
    detect_atom_pims,
    enumerate_fp1,
    fong_parity,
    gomory_solve,
    hnf,
    legacy_decode,
    legacy_encode,
    load_table,
    part_test,
    run,
    solve_bounded,
)

__all__ = [
    "MocError",
    "Table",
    "brute_force_ilp",
    "certify_pair",
    "dec_solve",
    "det",
    "detect_atom_pims",
    "enumerate_fp1",
    "fong_parity",
    "gomory_solve",
    "hnf",
    "legacy_decode",
    "legacy_encode",
    "load_table",
    "part_test",
    "run",
    "solve_bounded",
]
