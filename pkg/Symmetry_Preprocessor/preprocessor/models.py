"""
Pydantic models for preprocessor options and reports
"""
from typing import List, Optional
from pydantic import BaseModel, Field, field_validator


class PreprocessOptions(BaseModel):
    """Settings for one preprocessing run"""
    k: Optional[int] = None  # None = unbounded
    opt_facts: bool = True
    opt_unary: bool = True
    budget: Optional[int] = None
    verify: bool = False
    name_sbc_atoms: bool = False
    print_generators: bool = False

    @field_validator("k")
    @classmethod
    def k_positive(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError("k must be at least 1")
        return value

    @field_validator("budget")
    @classmethod
    def budget_positive(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError("budget must be at least 1")
        return value


class StageTiming(BaseModel):
    """Wall time of one pipeline stage"""
    stage: str
    duration_ms: float


class GeneratorStats(BaseModel):
    """Per-generator sizes"""
    cycles: str
    support_size: int
    index_size: int
    rules: int


class PreprocessStats(BaseModel):
    """Statistics reported on stderr"""
    atoms: int
    rules: int
    graph_vertices: int
    graph_edges: int
    generators: int
    generators_found: int
    identity_skipped: int = 0
    pipeline_errors: int = 0
    redundant_dropped: int = 0
    group_size: str
    search_nodes: int
    search_depth: int = 0
    orbit_sizes: List[int] = Field(default_factory=list)
    k: str = "inf"
    sbc_rules: int = 0
    chain_atoms: int = 0
    per_generator: List[GeneratorStats] = Field(default_factory=list)
    timings: List[StageTiming] = Field(default_factory=list)

    def render(self) -> str:
        """Plain-text form for --stats"""
        lines = [
            f"atoms: {self.atoms}",
            f"rules: {self.rules}",
            f"graph: {self.graph_vertices} vertices, {self.graph_edges} edges",
            f"generators: {self.generators} (found {self.generators_found}, "
            f"redundant {self.redundant_dropped}, identity {self.identity_skipped}, errors {self.pipeline_errors})",
            f"group size: {self.group_size}",
            f"search nodes: {self.search_nodes}, depth {self.search_depth}",
            f"orbit sizes: {' '.join(str(s) for s in self.orbit_sizes) or '-'}",
            f"k: {self.k}",
            f"sbc rules: {self.sbc_rules}, chain atoms: {self.chain_atoms}",
        ]
        for i, g in enumerate(self.per_generator, start=1):
            lines.append(f"  g{i}: {g.cycles} support={g.support_size} index={g.index_size} rules={g.rules}")
        for t in self.timings:
            lines.append(f"time {t.stage}: {t.duration_ms:.2f} ms")
        return "\n".join(lines)


class CompressionReport(BaseModel):
    """Answer-set counts before and after symmetry breaking"""
    total_models: int
    surviving_models: int
    compression: float = Field(ge=0.0, le=1.0)


class VerifyReport(BaseModel):
    """Oracle checks of one program against its symmetry-broken version"""
    total_models: int
    surviving_models: int
    compression: float
    sound: bool
    orbits_preserved: bool
    existence_preserved: bool
    orbits: int
    generators: int
    k: str = "inf"

    @property
    def ok(self) -> bool:
        return self.sound and self.orbits_preserved and self.existence_preserved

    def summary(self) -> str:
        """e.g. '2 models → 1 model, compression 50%, orbits preserved: yes'"""
        def count(n: int) -> str:
            return f"{n} model" if n == 1 else f"{n} models"

        head = f"{count(self.total_models)} → {count(self.surviving_models)}"
        if self.total_models == 0:
            return f"{head}, existence {'preserved' if self.existence_preserved else 'VIOLATED'}"
        text = (
            f"{head}, compression {round(self.compression * 100)}%, "
            f"orbits preserved: {'yes' if self.orbits_preserved else 'no'}"
        )
        if not self.sound:
            text += ", UNSOUND"
        return text
