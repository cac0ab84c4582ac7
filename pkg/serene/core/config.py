"""Engine limits and search defaults."""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveInt


class EngineLimits(BaseModel):
    """Thresholds that switch exhaustive scans to bounded ones."""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "associativity_full_check_limit": 10_000_000,
                "exact_permutation_group_max_arity": 7,
                "hypercube_max_vertices": 64,
                "free_completion_element_cap": 1_000_000,
                "spot_check_samples": 100,
            }
        },
    )

    associativity_full_check_limit: PositiveInt = 10_000_000
    associativity_samples: PositiveInt = 20_000
    exact_permutation_group_max_arity: PositiveInt = 7
    hypercube_max_vertices: PositiveInt = 64
    free_completion_element_cap: PositiveInt = 1_000_000
    spot_check_samples: PositiveInt = 100
    float_tolerance: float = Field(default=1e-12, gt=0)


class SearchSettings(BaseModel):
    """Parameters of a Latin cube completion search."""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "max_order": 8,
                "budget": 10_000_000,
                "seed": None,
                "reduce_symmetry": True,
            }
        },
    )

    max_order: Optional[PositiveInt] = None
    budget: PositiveInt = 10_000_000
    seed: Optional[int] = None
    reduce_symmetry: bool = True


DEFAULT_LIMITS = EngineLimits()
