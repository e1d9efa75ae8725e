"""LangGraph pipeline auditing an isometric tensor: validate → channel → classify → steady → spectrum → report."""

from typing import Any, Dict, List, Optional, TypedDict

import numpy as np
import structlog
from langgraph.graph import END, StateGraph

from src.channels.decomposition import decompose_modes
from src.channels.steady import dissipative_fixed_point
from src.core.errors import InvariantViolation
from src.core.linalg import antisymmetric_part
from src.core.spectrum import entanglement_spectrum
from src.isotns.lightlike import lightlike_momentum_channel
from src.isotns.mps import bulk_physical_block
from src.isotns.tensor import IsoTensor, channel_from_tensor, validate_tensor
from src.momentum.bands import classify_bands
from src.momentum.spectrum import bulk_spectrum
from src.momentum.steady import steady_state_k

logger = structlog.get_logger()


class AuditState(TypedDict, total=False):
    """State passed between audit nodes."""

    tensor: IsoTensor
    grid: int
    n_jobs: Optional[int]

    # validate
    validation: Dict[str, Any]

    # channel
    kind: str
    channel: Any
    flagged: List[int]

    # classify
    decomposition: Any
    bands: Any

    # steady
    steady: Any

    # spectrum
    spectrum: Any
    continuity: Dict[str, Any]

    # report
    report: Dict[str, Any]


class TensorAudit:
    """
    Audit pipeline for MPS (P, V_t, V_b) and light-like (P, V_r, V_t, V_l, V_b) tensors.

    Responsibilities:
    - Check purity and the isometric form, stopping early on failure
    - Build the virtual channel (real space for MPS, per-k for 4-leg tensors)
    - Classify preserved modes, solve the dissipative steady state
    - Report r, the correlation-length bound and the bulk-spectrum certificate
    """

    def __init__(self, grid: int = 256, n_jobs: Optional[int] = 1):
        self.grid = grid
        self.n_jobs = n_jobs
        self.graph = self._build_graph()
        logger.info("Tensor audit initialized", grid=grid)

    def _build_graph(self):
        workflow = StateGraph(AuditState)

        workflow.add_node("validate", self._validate_node)
        workflow.add_node("channel", self._channel_node)
        workflow.add_node("classify", self._classify_node)
        workflow.add_node("steady", self._steady_node)
        workflow.add_node("spectrum", self._spectrum_node)
        workflow.add_node("report", self._report_node)

        workflow.set_entry_point("validate")
        workflow.add_conditional_edges(
            "validate",
            self._route_after_validation,
            {"continue": "channel", "stop": "report"},
        )
        workflow.add_edge("channel", "classify")
        workflow.add_edge("classify", "steady")
        workflow.add_edge("steady", "spectrum")
        workflow.add_edge("spectrum", "report")
        workflow.add_edge("report", END)

        return workflow.compile()

    @staticmethod
    def _route_after_validation(state: AuditState) -> str:
        return "continue" if state["validation"]["passed"] else "stop"

    def _validate_node(self, state: AuditState) -> AuditState:
        report = validate_tensor(state["tensor"])
        logger.info("Validate node completed", passed=report.passed)
        return {"validation": report.model_dump(mode="json")}

    def _channel_node(self, state: AuditState) -> AuditState:
        tensor = state["tensor"]
        try:
            if tensor.is_mps:
                return {"kind": "mps", "channel": channel_from_tensor(tensor), "flagged": []}
            channel, flagged = lightlike_momentum_channel(tensor, state["grid"], n_jobs=state.get("n_jobs"))
            return {"kind": "lightlike", "channel": channel, "flagged": flagged}
        except Exception as e:
            logger.error("Channel node failed", error=str(e))
            raise

    def _classify_node(self, state: AuditState) -> AuditState:
        if state["kind"] == "mps":
            dec = decompose_modes(state["channel"].virtual)
            logger.info("Classify node completed", preserved=dec.preserved_count, r=dec.r)
            return {"decomposition": dec}
        bands = classify_bands(state["channel"], n_jobs=state.get("n_jobs"))
        logger.info("Classify node completed", generic_dimension=bands.generic_dimension, r=bands.r)
        return {"bands": bands}

    def _steady_node(self, state: AuditState) -> AuditState:
        if state["kind"] == "mps":
            return {"steady": dissipative_fixed_point(state["decomposition"])}
        return {"steady": steady_state_k(state["channel"], bands=state["bands"], n_jobs=state.get("n_jobs"))}

    def _spectrum_node(self, state: AuditState) -> AuditState:
        if state["kind"] == "mps":
            tc = state["channel"]
            block = bulk_physical_block(state["tensor"], tc=tc, dec=state["decomposition"])
            block = antisymmetric_part(block)
            return {"spectrum": entanglement_spectrum(block)}

        spectrum, continuity = bulk_spectrum(state["steady"])
        return {"spectrum": spectrum, "continuity": continuity.model_dump(mode="json")}

    def _report_node(self, state: AuditState) -> AuditState:
        validation = state["validation"]
        report: Dict[str, Any] = {"validation": validation, "passed": validation["passed"]}
        if not validation["passed"]:
            logger.warning(
                "Tensor failed validation, audit stopped",
                purity_residual=validation["purity_residual"],
                incoming_residual=validation["incoming_residual"],
            )
            return {"report": report}

        if state["kind"] == "mps":
            dec = state["decomposition"]
            r = float(dec.r)
            report.update({
                "kind": "mps",
                "preserved_count": dec.preserved_count,
                "odd_preserved": dec.odd_preserved,
                "spectral_radius": r,
                "correlation_length_bound": None if r <= 0.0 else float(1.0 / np.log(1.0 / r)),
                "bulk_lambdas": [float(v) for v in state["spectrum"].lambdas],
            })
        else:
            bands = state["bands"]
            continuity = state["continuity"]
            r = float(bands.r)
            report.update({
                "kind": "lightlike",
                "grid": state["grid"],
                "generic_preserved_dimension": bands.generic_dimension,
                "exceptions": bands.exceptions,
                "flagged_momenta": state["flagged"],
                "spectral_radius": r,
                "correlation_length_bound": None if r <= 0.0 else float(1.0 / np.log(1.0 / r)),
                "continuity": continuity,
            })
            report["passed"] = bool(continuity["certified"])
        logger.info("Report node completed", passed=report["passed"])
        return {"report": report}

    def invoke(self, tensor: IsoTensor) -> Dict[str, Any]:
        """
        Run the audit.

        Returns:
            Final state: the JSON-ready `report` plus the intermediate objects
            (`spectrum`, `channel`, ...) when validation passed.

        Raises:
            InvariantViolation: when a later stage finds a broken invariant
        """
        logger.info("Audit invoked", legs=[name.value for name in tensor.names])
        initial: AuditState = {"tensor": tensor, "grid": self.grid, "n_jobs": self.n_jobs}
        try:
            return self.graph.invoke(initial)
        except InvariantViolation as e:
            logger.error("Audit failed", error=str(e), invariant=e.invariant)
            raise
