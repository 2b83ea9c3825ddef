import logging
import math
from fractions import Fraction
from typing import Sequence

from streamflow.src.multi_cnn.exceptions import InvalidShares, ShareSumExceedsOne
from streamflow.src.multi_cnn.schemas import MultiCnnWorkload
from streamflow.src.perf_model.schemas import DeviceDescriptor

logger = logging.getLogger(__name__)

SHARE_DENOMINATOR = 10**6


def exact_share(share: float | Fraction) -> Fraction:
    """Decimal share as an exact fraction (0.1 -> 1/10, not the nearest binary double)."""
    return Fraction(share).limit_denominator(SHARE_DENOMINATOR)


def allocate_resources(
    workload: MultiCnnWorkload, device: DeviceDescriptor, shares: Sequence[float | Fraction]
) -> list[DeviceDescriptor]:
    """Per-CNN budgets: each capacity scaled by the CNN's share and floored.

    Clock, bandwidth and reconfiguration time are inherited; bandwidth is divided
    in time by the transfer schedule instead.
    """
    if len(shares) != len(workload.entries):
        raise InvalidShares(f"{len(shares)} shares for {len(workload.entries)} CNNs")
    exact = [exact_share(share) for share in shares]
    for entry, share in zip(workload.entries, exact):
        if not 0 < share <= 1:
            raise InvalidShares(f"share of {entry.name} must be in (0, 1], got {float(share)}")
    if sum(exact) > 1:
        raise ShareSumExceedsOne(f"shares sum to {float(sum(exact))}")

    return [
        device.model_copy(
            update={
                "name": f"{device.name}/{entry.name}",
                "dsp_capacity": math.floor(share * device.dsp_capacity),
                "bram_capacity": math.floor(share * device.bram_capacity),
                "lut_capacity": math.floor(share * device.lut_capacity),
            }
        )
        for entry, share in zip(workload.entries, exact)
    ]
