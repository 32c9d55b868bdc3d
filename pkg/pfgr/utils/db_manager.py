# FILE: pfgr/utils/db_manager.py
# ==============================================================================
import functools

from ..database import SessionLocal, get_engine


def db_session_manager(func):
    """
    Opens a session on the results store for the wrapped function and commits
    when it returns. The call is skipped (returns None) when no store is configured.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        if get_engine() is None:
            return None
        session = SessionLocal()
        try:
            result = func(*args, db=session, **kwargs)
            session.commit()
            return result
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()
    return wrapper
