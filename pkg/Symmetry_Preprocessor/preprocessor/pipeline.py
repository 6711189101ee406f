"""
Preprocessing Pipeline
parse → graph → automorphisms → verified generators → constraints → write

On any detection failure the input program is written back unchanged
(after a parse/write round trip) with a non-zero exit code.
"""
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

from .automorphism import SearchBudgetExceeded
from .graph_builder import BuildOptions, build_graph, write_graph
from .logging_config import log_stage, pipeline_logger
from .models import GeneratorStats, PreprocessOptions, PreprocessStats, StageTiming, VerifyReport
from .oracle import OracleTooLarge, answer_sets, projected_answer_sets
from .program import Program, SmodelsFormatError, parse_smodels, write_smodels
from .sbc_builder import TruncationK, build_sbc, sbc_rule_sets
from .symmetry import DetectionResult, GeneratorSet, detect_symmetries, format_cycles, orbit_of_set, support

# Exit codes
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_BUDGET_EXCEEDED = 2
EXIT_VERIFY_FAILED = 3


@dataclass
class PreprocessResult:
    """Bytes to emit plus everything the CLI reports"""
    output: bytes
    exit_code: int = EXIT_OK
    message: Optional[str] = None
    stats: Optional[PreprocessStats] = None
    generators: List[str] = field(default_factory=list)
    verify_report: Optional[VerifyReport] = None


class _StageClock:
    """Collects per-stage wall times"""

    def __init__(self):
        self.timings: List[StageTiming] = []
        self._started = time.perf_counter()

    def lap(self, stage: str, **data) -> None:
        now = time.perf_counter()
        duration_ms = (now - self._started) * 1000
        self._started = now
        self.timings.append(StageTiming(stage=stage, duration_ms=round(duration_ms, 3)))
        log_stage(stage, duration_ms, data)


def _build_options(options: PreprocessOptions) -> BuildOptions:
    return BuildOptions(opt_facts=options.opt_facts, opt_unary=options.opt_unary)


def _stats(program: Program, detection: DetectionResult, options: PreprocessOptions, augmented: Program, timings) -> PreprocessStats:
    blocks = sbc_rule_sets(program, detection.generators, options.k)
    per_generator = [
        GeneratorStats(
            cycles=format_cycles(g, program.name_of),
            support_size=len(support(g)),
            index_size=block.index_size,
            rules=len(block.rules),
        )
        for g, block in zip(detection.generators, blocks)
    ]
    return PreprocessStats(
        atoms=len(program.atoms),
        rules=len(program.rules),
        graph_vertices=detection.graph.vertex_count,
        graph_edges=detection.graph.edge_count,
        generators=len(detection.generators),
        generators_found=detection.found,
        identity_skipped=detection.identity_skipped,
        pipeline_errors=detection.pipeline_errors,
        redundant_dropped=detection.dropped_redundant,
        group_size=str(detection.group_size),
        search_nodes=detection.search_nodes,
        search_depth=detection.search_depth,
        orbit_sizes=list(detection.orbit_sizes),
        k=str(TruncationK(options.k)),
        sbc_rules=len(augmented.rules) - len(program.rules),
        chain_atoms=augmented.max_atom_id - program.max_atom_id,
        per_generator=per_generator,
        timings=list(timings),
    )


def verify_programs(program: Program, gens: GeneratorSet, augmented: Program, k: Optional[int] = None) -> VerifyReport:
    """
    Oracle checks of a program against its symmetry-broken version

    Raises:
        OracleTooLarge: either program above the oracle guard
    """
    originals = answer_sets(program)
    survivors = projected_answer_sets(augmented, program.atoms)
    original_sets = {m.atoms for m in originals}
    surviving_sets = {m.atoms for m in survivors}

    orbits = orbit_of_set(original_sets, gens)
    sound = surviving_sets <= original_sets
    orbits_preserved = all(orbit & surviving_sets for orbit in orbits)
    existence_preserved = bool(original_sets) == bool(surviving_sets)
    total = len(original_sets)
    ratio = 0.0 if total == 0 else max(0.0, 1.0 - len(surviving_sets) / total)

    report = VerifyReport(
        total_models=total,
        surviving_models=len(surviving_sets),
        compression=ratio,
        sound=sound,
        orbits_preserved=orbits_preserved,
        existence_preserved=existence_preserved,
        orbits=len(orbits),
        generators=len(gens),
        k=str(TruncationK(k)),
    )
    if not report.ok:
        pipeline_logger.error_data("Verification failed", data=report.model_dump())
    return report


def preprocess_program(program: Program, options: PreprocessOptions = PreprocessOptions()):
    """
    Detect symmetries and add constraints to an already parsed program

    Returns:
        (augmented program, detection result)

    Raises:
        SearchBudgetExceeded: search gave up
    """
    detection = detect_symmetries(program, _build_options(options), options.budget)
    augmented = build_sbc(program, detection.generators, options.k, options.name_sbc_atoms)
    return augmented, detection


def run_preprocess(
    source: bytes,
    options: PreprocessOptions = PreprocessOptions(),
    dump_graph: Optional[Union[str, Path]] = None,
) -> PreprocessResult:
    """
    Full preprocessing of smodels input bytes

    Exit codes: 0 success, 1 unreadable/unsupported input, 2 search budget
    exceeded, 3 --verify check failed (2 and 3 emit the input unchanged).
    """
    clock = _StageClock()
    try:
        program = parse_smodels(source)
    except SmodelsFormatError as e:
        pipeline_logger.error_data("Input rejected", data={"error": str(e)})
        return PreprocessResult(b"", EXIT_INPUT_ERROR, f"error: {e}")
    passthrough = write_smodels(program)
    clock.lap("parse", atoms=len(program.atoms), rules=len(program.rules))

    if dump_graph:
        graph, _ = build_graph(program, _build_options(options))
        Path(dump_graph).write_text(write_graph(graph), encoding="ascii")

    try:
        detection = detect_symmetries(program, _build_options(options), options.budget)
    except SearchBudgetExceeded as e:
        pipeline_logger.warning_data("Search budget exceeded, passing input through", data={"budget": e.budget})
        return PreprocessResult(passthrough, EXIT_BUDGET_EXCEEDED, f"warning: {e}; program passed through unchanged")
    clock.lap("detect", generators=len(detection.generators), nodes=detection.search_nodes)

    augmented = build_sbc(program, detection.generators, options.k, options.name_sbc_atoms)
    clock.lap("sbc", rules=len(augmented.rules) - len(program.rules))

    report = None
    if options.verify:
        try:
            report = verify_programs(program, detection.generators, augmented, options.k)
        except OracleTooLarge as e:
            return PreprocessResult(passthrough, EXIT_VERIFY_FAILED, f"warning: cannot verify: {e}; program passed through unchanged")
        clock.lap("verify", ok=report.ok)
        if not report.ok:
            return PreprocessResult(
                passthrough, EXIT_VERIFY_FAILED,
                f"warning: verification failed ({report.summary()}); program passed through unchanged",
                verify_report=report,
            )

    output = write_smodels(augmented)
    clock.lap("write", bytes=len(output))

    return PreprocessResult(
        output=output,
        stats=_stats(program, detection, options, augmented, clock.timings),
        generators=[format_cycles(g, program.name_of) for g in detection.generators],
        verify_report=report,
    )


def run_verify(source: Union[bytes, Program], k: Optional[int] = None, options: PreprocessOptions = PreprocessOptions()) -> VerifyReport:
    """
    Detect, break and check soundness, orbit coverage, existence and compression

    Raises:
        SmodelsFormatError: unreadable input
        SearchBudgetExceeded: search gave up
        OracleTooLarge: program above the oracle guard
    """
    program = source if isinstance(source, Program) else parse_smodels(source)
    augmented, detection = preprocess_program(program, options.model_copy(update={"k": k}))
    return verify_programs(program, detection.generators, augmented, k)
