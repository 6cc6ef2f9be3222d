"""
Pydantic schemas for the failure-probability and security reports.
"""

from pydantic import BaseModel
from typing import List, Optional


class ClassTerm(BaseModel):
    type_tag: int
    representative: List[int]  # half-units
    threshold: int
    multiplicity: int
    log2_prob: Optional[float]  # None when the tail probability is zero


class PeReport(BaseModel):
    preset: str
    mode: str
    union: str
    log2_pe: float
    classes: List[ClassTerm]


class AttackRow(BaseModel):
    attack: str
    m: int
    b: int
    classical: int
    quantum: int
    plausible: int


class SecurityReport(BaseModel):
    preset: str
    primal: AttackRow
    dual: AttackRow
