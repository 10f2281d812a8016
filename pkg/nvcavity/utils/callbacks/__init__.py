from .progress import ProgressCallbackBase, SweepCallback, TuningCallback

__all__ = ["ProgressCallbackBase", "TuningCallback", "SweepCallback"]
