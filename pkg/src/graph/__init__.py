"""LangGraph audit pipeline for isometric tensors."""

from src.graph.workflow import AuditState, TensorAudit

__all__ = ["AuditState", "TensorAudit"]
