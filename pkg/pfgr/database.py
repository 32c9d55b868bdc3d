# FILE: pfgr/database.py
# ==============================================================================
# Optional store for result records. Nothing is created unless
# PFGR_RESULTS_DATABASE_URL is set; file-based sqlite URLs are the usual
# choice for batch runs.
# ==============================================================================
from typing import Optional

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import declarative_base, sessionmaker

from . import config

Base = declarative_base()

SessionLocal = sessionmaker(autocommit=False, autoflush=False, expire_on_commit=False)

_engine: Optional[Engine] = None
_engine_url: Optional[str] = None


def get_engine(url: Optional[str] = None) -> Optional[Engine]:
    """Returns the engine for the results store, creating tables on first use."""
    global _engine, _engine_url
    url = url or config.RESULTS_DATABASE_URL
    if not url:
        return None
    if _engine is None or _engine_url != url:
        _engine_url = url
        # `postgres://` URLs from hosting dashboards need the explicit driver name.
        if url.startswith("postgres://"):
            url = url.replace("postgres://", "postgresql://", 1)
        _engine = create_engine(url)
        Base.metadata.create_all(_engine)
        SessionLocal.configure(bind=_engine)
    return _engine
