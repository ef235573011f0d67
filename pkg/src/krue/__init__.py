"""Unclonable encryption with key recycling: protocol model and rate analysis."""

from .bits import Bits
from .channel import ChannelModel, Encoding
from .protocol import KeyBundle, ProtocolParams, Session, run_session

__all__ = ["Bits", "ChannelModel", "Encoding", "KeyBundle", "ProtocolParams", "Session", "run_session"]
__version__ = "0.1.0"
