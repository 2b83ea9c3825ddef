from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolflow settings, loaded from the environment or a .env file."""

    PROJECT_NAME: str = "streamflow"
    LOG_LEVEL: str = "WARNING"

    # Worker threads for design evaluation (unset -> hardware concurrency)
    STREAMFLOW_THREADS: int | None = Field(default=None, ge=1)
    EVALUATION_CHUNK: int = Field(default=256, ge=1)

    # Exhaustive enumeration
    ENUMERATION_BOUND: int = Field(default=1_000_000, ge=1)
    MAX_PARTITIONS: int = Field(default=3, ge=1)

    # Resource model defaults (placeholders, calibrate per device file)
    BRAM_BLOCK_BITS: int = 18432
    LUT_ALPHA: float = 300.0
    LUT_BETA: float = 40.0

    SIMULATION_MAX_BATCH: int = 10_000

    # Simulated annealing
    SA_INITIAL_TEMPERATURE: float = Field(default=1.0, gt=0)
    SA_COOLING_RATE: float = Field(default=0.95, gt=0, lt=1)
    SA_ITERATIONS_PER_TEMPERATURE: int = Field(default=100, ge=1)
    SA_TEMPERATURE_FLOOR: float = Field(default=1e-3, gt=0)
    # Share of folding moves that redraw coarse and fine together on up to two layers
    SA_REDRAW_SHARE: float = Field(default=0.25, ge=0, le=1)

    # Multi-CNN mapping
    MULTI_COST_LAMBDA: float = Field(default=0.1, ge=0)
    SHARE_STEPS: int = Field(default=20, ge=2)

    # Batch used for the throughput-optimal side of the latency gap
    GAP_BATCH: int = Field(default=256, ge=1)

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()
