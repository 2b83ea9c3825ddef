from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field

from streamflow.src.model_ir.enums import LayerKind


class StageConfig(BaseModel):
    """Folding of one stage.

    coarse replicates the processing unit across output channels; fine unrolls
    the multipliers inside one unit's dot product.
    """

    model_config = ConfigDict(frozen=True)

    coarse: int = Field(default=1, ge=1)
    fine: int = Field(default=1, ge=1)

    @property
    def parallelism(self) -> int:
        return self.coarse * self.fine


class SdfStage(BaseModel):
    model_config = ConfigDict(frozen=True)

    layer_index: int = Field(..., ge=0)
    name: str
    kind: LayerKind
    config: StageConfig
    tokens_in: int = Field(..., gt=0)
    tokens_out: int = Field(..., gt=0)
    cycles: int = Field(..., gt=0)


class SdfArc(BaseModel):
    model_config = ConfigDict(frozen=True)

    producer: int = Field(..., ge=0)
    consumer: int = Field(..., ge=0)
    tokens: int = Field(..., gt=0)


class SdfGraph(BaseModel):
    """Stages of a linear pipeline and the arcs between them.

    Tokens are tensor elements; every count is per network input.
    """

    model_config = ConfigDict(frozen=True)

    stages: tuple[SdfStage, ...] = Field(..., min_length=1)
    arcs: tuple[SdfArc, ...] = ()

    @property
    def cycles(self) -> tuple[int, ...]:
        return tuple(stage.cycles for stage in self.stages)

    def rate_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        """Topology matrix in tokens per cycle, one row per arc."""
        rows = []
        for arc in self.arcs:
            row = [Fraction(0)] * len(self.stages)
            producer, consumer = self.stages[arc.producer], self.stages[arc.consumer]
            row[arc.producer] += Fraction(producer.tokens_out, producer.cycles)
            row[arc.consumer] -= Fraction(consumer.tokens_in, consumer.cycles)
            rows.append(tuple(row))
        return tuple(rows)


class ConsistencyReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    conserving: bool
    balance_vector: tuple[Fraction, ...] | None = None

    @property
    def consistent(self) -> bool:
        return self.balance_vector is not None
