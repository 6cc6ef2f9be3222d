from pydantic import PositiveFloat, PositiveInt
from pydantic_settings import BaseSettings
from typing import Literal


class Settings(BaseSettings):
    APP_NAME: str = "E8KEM"
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    DEFAULT_PRESET: str = "e8kem-2048-p5"
    POLY_MUL: Literal["schoolbook", "karatsuba"] = "schoolbook"

    ANALYSIS_MODE: Literal["float", "exact"] = "float"
    ANALYSIS_ENUM_BUDGET: PositiveInt = 50_000_000
    ANALYSIS_SUPPORT_CAP: PositiveInt = 4_000_000
    ANALYSIS_FLOAT_FLOOR: PositiveFloat = 2.0 ** -1000

    EXCHANGE_HOST: str = "127.0.0.1"
    EXCHANGE_PORT: int = 8765
    EXCHANGE_TIMEOUT: PositiveFloat = 10.0
    MAX_FRAME_BYTES: PositiveInt = 1 << 20

    # hex entropy override, only honoured with --insecure-deterministic
    E8KEM_SEED: str = ""

    CORS_ORIGINS: str = "*"

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"


settings = Settings()
