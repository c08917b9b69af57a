from pydantic_settings import BaseSettings
from dotenv import load_dotenv
import os
from typing import Optional

load_dotenv()  # Explicitly load the .env file

class Settings(BaseSettings):
    M11_PRECISION: int = 40
    M11_BOX: int = 60
    M11_PMAX: int = 60
    M11_NORM_BOUND: int = 10000
    M11_CACHE_DIR: str = "./.m11cache"
    M11_WORKERS: int = 1
    M11_TOLERANCE: float = 1e-9
    DATABASE_URL: Optional[str] = None

    class Config:
        env_file = ".env"

    def database_url(self) -> str:
        """Explicit DATABASE_URL, or a SQLite file inside the cache dir"""
        if self.DATABASE_URL:
            return self.DATABASE_URL
        return f"sqlite:///{os.path.join(self.M11_CACHE_DIR, 'counts.db')}"


settings = Settings()


def override(**values) -> Settings:
    """Apply command-line values on top of env/.env/defaults, in place"""
    for name, value in values.items():
        if value is not None:
            setattr(settings, name, value)
    return settings
