from .app import create_app
from .sessions import Session, SessionManager, StaleSeqError, UnknownSessionError

__all__ = ["create_app", "Session", "SessionManager", "StaleSeqError", "UnknownSessionError"]
