"""
Preset catalogue: derived constants and message sizes.
"""

from fastapi import APIRouter, HTTPException

from app.core.errors import ParamsError
from app.core.params import get_preset, preset_names
from app.utils.response import success_response

router = APIRouter(prefix="/api/params", tags=["Parameters"])


@router.get("")
async def list_params():
    data = [get_preset(name).summary() for name in preset_names()]
    return success_response(data=data)


@router.get("/{name}")
async def get_params(name: str):
    try:
        params = get_preset(name)
    except ParamsError as exc:
        raise HTTPException(status_code=404, detail=str(exc))
    return success_response(data=params.summary())
