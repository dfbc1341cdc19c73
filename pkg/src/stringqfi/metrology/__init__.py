from __future__ import annotations

from stringqfi.metrology.qfi import (
    QfiResult,
    crlb,
    dqfi_dtheta,
    qfi_at,
    qfi_bloch,
    qfi_closed_form,
    qfi_from_response,
    qfi_small_r,
    qfi_thermal,
    unimodality_report,
)

__all__ = [
    "QfiResult",
    "crlb",
    "dqfi_dtheta",
    "qfi_at",
    "qfi_bloch",
    "qfi_closed_form",
    "qfi_from_response",
    "qfi_small_r",
    "qfi_thermal",
    "unimodality_report",
]
