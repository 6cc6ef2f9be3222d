"""
Pydantic schemas for the stateless KEM endpoints.
Hex fields carry the codec byte layouts unchanged.
"""

from pydantic import BaseModel, Field
from typing import Optional

from app.core.config import settings


# ---- Key generation ----
class KeygenRequest(BaseModel):
    preset: str = settings.DEFAULT_PRESET
    entropy_hex: Optional[str] = Field(default=None, description="64 bytes; random when omitted")


class KeygenResponse(BaseModel):
    public_hex: str
    secret_hex: str


# ---- Encapsulation ----
class EncapsRequest(BaseModel):
    preset: str = settings.DEFAULT_PRESET
    public_hex: str
    entropy_hex: Optional[str] = Field(default=None, description="32 bytes; random when omitted")


class EncapsResponse(BaseModel):
    ciphertext_hex: str
    key_hex: str


# ---- Decapsulation ----
class DecapsRequest(BaseModel):
    preset: str = settings.DEFAULT_PRESET
    secret_hex: str
    ciphertext_hex: str


class DecapsResponse(BaseModel):
    key_hex: str
