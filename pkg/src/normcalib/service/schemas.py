"""Request/response models for the scenario service.

Scalars travel as rational strings ("p/q") so exact mode survives the
wire; float mode parses the same strings into binary floats.  Every
sampled scenario carries its seed, and identical requests produce
byte-identical reports.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

Mode = Literal["exact", "float"]
RationalRow = list[str]


class NormSpec(BaseModel):
    """A polyhedral norm: a builtin family or an explicit facet list."""

    builtin: Optional[Literal["linf", "l1", "random"]] = None
    dim: Optional[int] = Field(default=None, ge=2, le=8)
    facet_pairs: int = Field(default=8, ge=1, le=64)
    seed: int = 0
    facets: Optional[list[RationalRow]] = None
    vertices: Optional[list[RationalRow]] = None  # optional cross-validation

    @model_validator(mode="after")
    def _check(self):
        if self.builtin is None and self.facets is None:
            raise ValueError("norm needs either a builtin name or explicit facets")
        if self.builtin is not None and self.dim is None:
            raise ValueError("builtin norms need a dimension")
        return self


class SectionRequest(BaseModel):
    norm: NormSpec
    plane: list[RationalRow] = Field(min_length=2, max_length=2)
    mode: Mode = "exact"


class DensityRequest(BaseModel):
    norm: NormSpec
    sigma: list[RationalRow] = Field(min_length=2, max_length=2)
    plane: Optional[list[RationalRow]] = None  # enables the weighted density
    which: Literal["bh", "ht", "alpha"] = "bh"
    mode: Mode = "exact"


class CalibrateRequest(BaseModel):
    norm: NormSpec
    plane: list[RationalRow] = Field(min_length=2, max_length=2)
    samples: int = Field(default=1000, ge=0, le=1_000_000)
    seed: int = 0
    coord_bound: int = Field(default=10, ge=1, le=1000)
    collect_samples: bool = False
    mode: Mode = "exact"


class PropCheckRequest(BaseModel):
    random_polygons: int = Field(default=100, ge=1, le=100_000)
    seed: int = 0
    max_half_edges: int = Field(default=8, ge=2, le=16)
    functional_count: int = Field(default=4, ge=1, le=12)
    mode: Mode = "exact"


class DiscSpec(BaseModel):
    """Convex disc boundary in plane coordinates; defaults to a square."""

    points: list[RationalRow] = Field(
        default=[["1", "-1"], ["1", "1"], ["-1", "1"], ["-1", "-1"]],
        min_length=3,
    )


class SemiEllipticRequest(BaseModel):
    norm: NormSpec
    plane: Optional[list[RationalRow]] = None  # None: seeded random plane
    disc: DiscSpec = DiscSpec()
    trials: int = Field(default=20, ge=1, le=10_000)
    seed: int = 0
    ring: Literal["Z", "Z2"] = "Z"
    mode: Mode = "exact"


class LpSearchRequest(BaseModel):
    norm: NormSpec
    plane: list[RationalRow] = Field(min_length=2, max_length=2)
    density: Literal["bh", "ht"] = "bh"
    samples: int = Field(default=200, ge=0, le=100_000)
    seed: int = 0
    coord_bound: int = Field(default=10, ge=1, le=1000)
    mode: Mode = "exact"


class KdimSearchRequest(BaseModel):
    body: NormSpec  # its dim is the k of the search (2 or 3)
    samples: int = Field(default=100, ge=0, le=100_000)
    seed: int = 0
    extra_pairs: int = Field(default=2, ge=0, le=8)
    revalidation_samples: int = Field(default=0, ge=0, le=1_000_000)
    mode: Mode = "exact"


class ScenarioResponse(BaseModel):
    command: str
    status: Literal["ok", "violation"]
    exit_code: int
    report: dict
