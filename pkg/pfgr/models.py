# FILE: pfgr/models.py
# ==============================================================================
# Enumerations shared across the toolkit and the table backing the optional
# result-record store.
# ==============================================================================
import enum

from sqlalchemy import Column, DateTime, Enum as SAEnum, Float, Integer, String, Text

from .database import Base

# --- ENUM DEFINITIONS ---


class RoleKind(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    X = "X"
    Y = "Y"
    PLAIN = "PLAIN"


class Engine(str, enum.Enum):
    BRUTE = "brute"
    DIAM = "diam"


class DiameterAlgo(str, enum.Enum):
    BRUTE = "brute"
    TD = "td"


class TDProperty(str, enum.Enum):
    TREE = "tree"
    VERTEX_COVERAGE = "vertex_coverage"
    EDGE_COVERAGE = "edge_coverage"
    CONNECTIVITY = "connectivity"


class Comparison(str, enum.Enum):
    DOMINATES = "dominates"
    DOMINATED = "dominated"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


# --- TABLE MODELS ---


class ResultRow(Base):
    __tablename__ = "result_records"
    id = Column(Integer, primary_key=True, index=True)
    command = Column(String(64), nullable=False, index=True)
    engine = Column(SAEnum(Engine, native_enum=False), nullable=True, index=True)
    answer = Column(String(255), nullable=True)
    n = Column(Integer, nullable=True)
    d = Column(Integer, nullable=True)
    m = Column(Integer, nullable=True)
    width = Column(Integer, nullable=True)
    seed = Column(Integer, nullable=True)
    reduce_ms = Column(Float, nullable=True)
    solve_ms = Column(Float, nullable=True)
    total_ms = Column(Float, nullable=True)
    fallbacks = Column(Text, nullable=True)  # JSON object of fallback counters
    created_at = Column(DateTime(timezone=True), nullable=False)
