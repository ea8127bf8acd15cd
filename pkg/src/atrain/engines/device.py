"""Compute device detection: gpu when a CUDA runtime is actually usable."""

from __future__ import annotations

from typing import Callable

from ..errors import DeviceUnavailableError, InvalidConfigError

CPU = "cpu"
GPU = "gpu"
AUTO = "auto"


def detect_device() -> str:
    """Report ``gpu`` only when a CUDA accelerator and runtime are present.

    Never raises; anything short of a working accelerator means ``cpu``.
    """
    try:
        import torch

        if torch.cuda.is_available():
            return GPU
    except Exception:
        pass
    try:
        import ctranslate2

        if ctranslate2.get_cuda_device_count() > 0:
            return GPU
    except Exception:
        pass
    return CPU


def resolve_device(requested: str = AUTO, detector: Callable[[], str] = detect_device) -> str:
    """Turn a requested device option into a concrete device.

    ``auto`` takes whatever the detector reports. An explicit ``gpu`` on a
    machine without one is an error surfaced to the caller, never a silent
    fallback.
    """
    if requested not in (AUTO, CPU, GPU):
        raise InvalidConfigError(f"device must be auto, cpu or gpu, not '{requested}'")
    if requested == AUTO:
        return detector()
    if requested == GPU and detector() != GPU:
        raise DeviceUnavailableError("device=gpu requested but no CUDA accelerator is usable")
    return requested
