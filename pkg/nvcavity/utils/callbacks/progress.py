from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd


class ProgressCallbackBase(ABC):
    def __init__(self, trace_path: Optional[str] = None):
        """Records one trace entry per step of a long computation.

        The trace is rewritten to ``trace_path`` (CSV) after every step when
        the path is set, so an interrupted run still leaves its history.
        """
        self.result_trace: List[Dict[str, Any]] = []
        self.trace_path = trace_path

    @abstractmethod
    def _measure(self, i: int, *args: Any) -> Tuple[str, Dict[str, Any]]:
        raise NotImplementedError("must be implemented")

    def _should_stop(self, trace_result: Dict[str, Any]) -> bool:
        return False

    def __call__(self, i: int, *args: Any) -> Tuple[bool, Optional[str]]:
        description, trace_result = self._measure(i, *args)
        self.result_trace.append(trace_result)

        if self.trace_path is not None:
            df = pd.DataFrame(self.result_trace)
            df.to_csv(self.trace_path, index=False)

        return self._should_stop(trace_result), description

    @property
    def trace(self) -> pd.DataFrame:
        return pd.DataFrame(self.result_trace)


class TuningCallback(ProgressCallbackBase):
    """Trace of a frequency tuning run: ``(parameter, frequency)`` per evaluation.

    Parameters
    ----------
    parameter : str
        Name of the tuned dimension.
    target_hz : float
        Frequency the tuning drives towards.
    tolerance_hz : float, optional
        Stop once the evaluated frequency is this close to the target.
        Zero (the default) never stops early.
    trace_path : str, optional
        CSV file receiving the trace.
    """

    def __init__(
        self,
        parameter: str,
        target_hz: float,
        tolerance_hz: float = 0.0,
        trace_path: Optional[str] = None,
    ):
        super(TuningCallback, self).__init__(trace_path=trace_path)
        self.parameter = parameter
        self.target_hz = target_hz
        self.tolerance_hz = tolerance_hz

    def _measure(self, i: int, *args: Any) -> Tuple[str, Dict[str, Any]]:
        value, frequency = args
        error = frequency - self.target_hz
        description = "{}={:.6e} m f={:.6f} GHz".format(
            self.parameter, value, frequency / 1e9
        )
        return (
            description,
            {
                "evaluation": i,
                self.parameter: value,
                "frequency_hz": frequency,
                "error_hz": error,
            },
        )

    def _should_stop(self, trace_result: Dict[str, Any]) -> bool:
        return abs(trace_result["error_hz"]) < self.tolerance_hz


class SweepCallback(ProgressCallbackBase):
    """Trace of a DC-field sweep: dressed frequency and deepest dip per field."""

    def _measure(self, i: int, *args: Any) -> Tuple[str, Dict[str, Any]]:
        b_field, dressed_omega, s11_sq = args
        description = "B={:.4f} mT".format(b_field * 1e3)
        return (
            description,
            {
                "step": i,
                "b_tesla": b_field,
                "omega_rad_s": dressed_omega,
                "min_s11_sq": float(np.min(s11_sq)),
            },
        )
