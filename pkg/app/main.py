"""
E8KEM: Module-LWE key exchange with E8 reconciliation.
FastAPI entry point.
"""

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.core.config import settings
from app.core.logs import configure_logging
from app.core.params import preset_names
from app.routers import analysis, kem, params

configure_logging(settings.LOG_LEVEL)

app = FastAPI(
    title=settings.APP_NAME,
    description="Module-LWE KEM with E8 lattice reconciliation, failure-probability and security reports",
    version="1.0.0",
)

# CORS
origins = [o.strip() for o in settings.CORS_ORIGINS.split(",") if o.strip()]
app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=False,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(params.router)
app.include_router(kem.router)
app.include_router(analysis.router)


@app.get("/")
async def root():
    return {
        "name": settings.APP_NAME,
        "version": "1.0.0",
        "status": "running",
        "default_preset": settings.DEFAULT_PRESET,
    }


@app.get("/api/health")
async def health():
    return {"status": "healthy", "presets": len(preset_names())}
