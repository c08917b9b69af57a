import logging
import os
from typing import Optional

from sqlalchemy import create_engine
from sqlalchemy.ext.declarative import declarative_base
from sqlalchemy.orm import sessionmaker

from .config import settings

logger = logging.getLogger(__name__)

FALLBACK_URL = "sqlite:///./m11lab.db"


def _connect_args(url: str) -> dict:
    return {"check_same_thread": False} if url.startswith("sqlite") else {}


def _ensure_sqlite_dir(url: str) -> None:
    prefix = "sqlite:///"
    if url.startswith(prefix) and url != "sqlite:///:memory:":
        directory = os.path.dirname(url[len(prefix):])
        if directory:
            os.makedirs(directory, exist_ok=True)


def get_database_engine(url: Optional[str] = None):
    """Get database engine with fallback to SQLite"""
    url = url or settings.database_url()
    try:
        _ensure_sqlite_dir(url)
        # Test connection
        test_engine = create_engine(url, connect_args=_connect_args(url))
        test_engine.connect().close()
        logger.info("using count cache at %s", url)
        return test_engine
    except Exception as e:
        logger.warning("count cache %s unreachable (%s), falling back to %s", url, e, FALLBACK_URL)
        return create_engine(FALLBACK_URL, connect_args=_connect_args(FALLBACK_URL))


# Bound on first use so that importing the models touches no files
_engine = None
SessionLocal = sessionmaker(autocommit=False, autoflush=False)
Base = declarative_base()


def get_engine():
    global _engine
    if _engine is None:
        _engine = get_database_engine()
        SessionLocal.configure(bind=_engine)
    return _engine


def get_db():
    get_engine()
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()


def initialize_database(bind=None):
    """Initialize database tables"""
    from . import models

    models.Base.metadata.create_all(bind=bind or get_engine())
