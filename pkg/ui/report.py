"""
Output rendering - verdict JSON, bench table, corpus listing
"""

import json

import numpy as np

from modules.constants import EXIT_HOLDS, EXIT_REFUTED, EXIT_UNKNOWN, SCHEMA_VERSION


def _vector(x):
    return [float(v) for v in np.asarray(x, dtype=float)]


def _sub_verdict(verdict):
    payload = {"status": verdict.status.value, "certificates": list(verdict.certificates)}
    if verdict.witness is not None:
        payload["witness"] = _vector(verdict.witness)
    return payload


def verdict_payload(verdict, include_timing=True):
    """
    Verdict -> JSON-ready dict

    Parameters
    ----------
    verdict : Verdict
    include_timing : bool
        timing_ms is the only field that changes between identical runs

    Returns
    -------
    payload : dict
    """
    payload = {
        "schema": SCHEMA_VERSION,
        "status": verdict.status.value,
        "mode": verdict.mode,
    }
    if verdict.witness is not None:
        payload["witness"] = _vector(verdict.witness)
        payload["witness_value"] = float(verdict.witness_value)
    payload["certificates"] = list(verdict.certificates)
    if verdict.per_vertex is not None:
        payload["per_vertex"] = {label: _sub_verdict(v) for label, v in verdict.per_vertex.items()}
    payload["diagnostics"] = list(verdict.diagnostics)
    if include_timing and verdict.timing_ms is not None:
        payload["timing_ms"] = round(verdict.timing_ms, 3)
    return payload


def render_json(payload):
    return json.dumps(payload, indent=2)


def exit_code(verdict):
    """0 = the requested property holds, 1 = refuted, 2 = unknown"""
    if verdict.holds:
        return EXIT_HOLDS
    if verdict.refuted:
        return EXIT_REFUTED
    return EXIT_UNKNOWN


def render_table(df):
    """Plain-text table for stdout"""
    return df.to_string(index=False, na_rep="-")
