"""
Response envelope shared by every HTTP endpoint.
"""

from typing import Any

from pydantic import BaseModel


def _plain(data: Any) -> Any:
    if isinstance(data, BaseModel):
        return data.model_dump()
    if isinstance(data, (list, tuple)):
        return [_plain(item) for item in data]
    return data


def success_response(data: Any = None, message: str = "Success") -> dict:
    """{"success": True, "data": ..., "message": ...}; pydantic models are dumped."""
    return {"success": True, "data": _plain(data), "message": message}
