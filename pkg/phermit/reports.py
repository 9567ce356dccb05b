"""Report writers module.

This module contains the tabular reports produced by the toolkit (spectra, certificates, residual tables,
trajectories, sweeps and spectral maps). All of them derive from :class:`phermit.ifaces.FormatHandler`,
so they can be rendered as text, CSV or JSON through ``report(format)`` and written with ``save(prefix)``.
Each output carries the reproducibility header given at construction, if any.
"""

import json
import logging
from typing import TYPE_CHECKING

import numpy as np

import phermit.ifaces
import phermit.typedefs  # noqa: F401
import phermit.utils

if TYPE_CHECKING:
    from typing import Any, AnyStr, Dict, List, Optional, Sequence  # noqa: F401

logger = logging.getLogger(__name__)


def _format_value(value):
    # type: (Any) -> str
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _jsonable(value):
    # type: (Any) -> phermit.typedefs.JSON
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(np.real(value)), "im": float(np.imag(value))}
    if isinstance(value, dict):
        return {str(key): _jsonable(val) for key, val in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(val) for val in value]
    return value


class TableReport(phermit.ifaces.FormatHandler):
    """Report made of a list of rows sharing the same columns.

    Complex-valued cells are split into ``<name>_re`` and ``<name>_im`` columns in CSV and text outputs.

    Attributes:
        rows: list of dictionaries, one per table row.
        columns: ordered column names (default: keys of the first row).
    """

    columns = None  # type: Optional[List[str]]

    def __init__(self, rows, format="csv", header=None, columns=None):
        # type: (List[Dict[str, Any]], Optional[AnyStr], Optional[Dict[str, Any]], Optional[List[str]]) -> None
        super().__init__(format=format, header=header)
        self.rows = [dict(row) for row in rows]
        if columns is not None:
            self.columns = list(columns)
        elif self.columns is None:
            self.columns = list(self.rows[0].keys()) if self.rows else []

    def _flat_columns(self):
        # type: () -> List[str]
        flat = []
        for col, split in zip(self.columns, self._split_flags()):
            if split:
                flat.extend([f"{col}_re", f"{col}_im"])
            else:
                flat.append(col)
        return flat

    def _flat_values(self, row):
        # type: (Dict[str, Any]) -> List[str]
        values = []
        for col, split in zip(self.columns, self._split_flags()):
            val = row.get(col)
            if split:
                val = complex(val)
                values.extend([_format_value(val.real), _format_value(val.imag)])
            else:
                values.append(_format_value(val))
        return values

    def _split_flags(self):
        return [any([isinstance(row.get(col), (complex, np.complexfloating)) for row in self.rows])
                for col in self.columns]

    def summary(self):
        # type: () -> Dict[str, Any]
        """Returns report-level values printed before (text) or next to (JSON) the rows."""
        return {}

    def report_csv(self):
        # type: () -> Optional[AnyStr]
        """Returns the rows as a CSV string, preceded by ``# key: value`` header comment lines."""
        lines = phermit.utils.header_to_lines(self.header) if self.header else []
        lines.append(",".join(self._flat_columns()))
        lines.extend([",".join(self._flat_values(row)) for row in self.rows])
        return "\n".join(lines)

    def report_json(self):
        # type: () -> Optional[AnyStr]
        """Returns the summary and rows as a JSON string with a ``header`` object."""
        content = {"header": _jsonable(self.header or {})}
        content.update({key: _jsonable(val) for key, val in self.summary().items()})
        content["rows"] = [{col: _jsonable(row.get(col)) for col in self.columns} for row in self.rows]
        return json.dumps(content, indent=4)

    def report_text(self):
        # type: () -> Optional[AnyStr]
        """Returns a print-friendly, column-aligned version of the table."""
        lines = phermit.utils.header_to_lines(self.header) if self.header else []
        lines.extend([f"{key}: {_format_value(val)}" for key, val in self.summary().items()])
        table = [self._flat_columns()] + [self._flat_values(row) for row in self.rows]
        widths = [max([len(line[idx]) for line in table]) for idx in range(len(table[0]))] if table[0] else []
        for line in table:
            lines.append("  ".join([cell.rjust(width) for cell, width in zip(line, widths)]))
        return "\n".join(lines)


class SpectrumReport(TableReport):
    """Classified spectrum, with one row per eigenvalue.

    The ``class`` column is one of ``real``, ``pair+``, ``pair-`` or ``unpaired``; ``pair_index`` is the
    index of the conjugate partner, or ``-1``.
    """

    columns = ["index", "eigenvalue", "class", "pair_index", "multiplicity"]

    def __init__(self, eigenvalues, spectrum_class, multiplicities=None, format="csv", header=None):
        eigenvalues = np.asarray(eigenvalues, dtype=np.complex128).reshape(-1)
        if multiplicities is None:
            multiplicities = [1] * eigenvalues.size
        assert len(multiplicities) == eigenvalues.size, "multiplicity count mismatch"
        rows = [{
            "index": idx,
            "eigenvalue": complex(val),
            "class": spectrum_class.label(idx),
            "pair_index": spectrum_class.partner(idx),
            "multiplicity": int(multiplicities[idx]),
        } for idx, val in enumerate(eigenvalues)]
        self.classification = spectrum_class.classification
        super().__init__(rows, format=format, header=header)

    @staticmethod
    def from_system(system, spectrum_class, format="csv", header=None):
        """Builds the report of a biorthonormal eigensystem and its spectrum class."""
        multiplicities = [system.multiplicity_of(idx) for idx in range(system.dim)]
        return SpectrumReport(system.eigenvalues, spectrum_class, multiplicities, format=format, header=header)

    def _flat_columns(self):
        return ["index", "re", "im", "class", "pair_index", "multiplicity"]

    def summary(self):
        return {"classification": self.classification}


class CertificateReport(phermit.ifaces.FormatHandler):
    """Outcome of the certification pipeline: classification, residual and constructed metric.

    When the spectrum is not pseudo-Hermitian, ``eta`` and ``residual`` are ``None`` and the unpaired
    eigenvalues are listed instead.
    """

    def __init__(self, classification, residual=None, eta=None, unpaired=None, format="json", header=None):
        # type: (str, Optional[float], Optional[np.ndarray], Optional[Sequence[complex]], Optional[AnyStr], Optional[Dict[str, Any]]) -> None  # noqa: E501
        super().__init__(format=format, header=header)
        self.classification = classification
        self.residual = residual
        self.eta = None if eta is None else np.asarray(eta)
        self.unpaired = [complex(val) for val in (unpaired or [])]

    @staticmethod
    def from_certificate(certificate, format="json", header=None):
        """Builds the report of a successful certification."""
        return CertificateReport(certificate.spectrum_class.classification, residual=certificate.residual,
                                 eta=certificate.eta.op, format=format, header=header)

    def as_dict(self):
        # type: () -> phermit.typedefs.JSON
        content = {
            "header": _jsonable(self.header or {}),
            "classification": self.classification,
            "residual": self.residual,
            "eta": None if self.eta is None else phermit.utils.matrix_to_dict(self.eta),
        }
        if self.unpaired:
            content["unpaired"] = _jsonable(self.unpaired)
        return content

    def report_json(self):
        # type: () -> Optional[AnyStr]
        return json.dumps(self.as_dict(), indent=4)

    def report_csv(self):
        # type: () -> Optional[AnyStr]
        # matrices have no tabular layout; the metric is only available in JSON outputs
        lines = phermit.utils.header_to_lines(self.header) if self.header else []
        lines.append("classification,residual")
        lines.append(f"{self.classification},{'' if self.residual is None else _format_value(self.residual)}")
        return "\n".join(lines)

    def report_text(self):
        # type: () -> Optional[AnyStr]
        lines = phermit.utils.header_to_lines(self.header) if self.header else []
        lines.append(f"classification: {self.classification}")
        if self.residual is not None:
            lines.append(f"residual: {self.residual:.3e}")
        if self.eta is not None:
            lines.append(f"eta:\n{np.array2string(self.eta, precision=6, suppress_small=True)}")
        if self.unpaired:
            lines.append("unpaired: " + ", ".join([f"{val:.6g}" for val in self.unpaired]))
        return "\n".join(lines)


class ResidualReport(TableReport):
    """Named residuals compared to a tolerance (``ok`` is true when the residual lies within it)."""

    columns = ["name", "value", "ok"]

    def __init__(self, residuals, tol=None, format="csv", header=None):
        # type: (Dict[str, float], Optional[float], Optional[AnyStr], Optional[Dict[str, Any]]) -> None
        self.tol = tol
        rows = [{"name": name, "value": float(val), "ok": "" if tol is None else bool(val <= tol)}
                for name, val in residuals.items()]
        super().__init__(rows, format=format, header=header)

    @property
    def residuals(self):
        # type: () -> Dict[str, float]
        return {row["name"]: row["value"] for row in self.rows}

    def summary(self):
        return {} if self.tol is None else {"tolerance": self.tol}


class TrajectoryReport(TableReport):
    """Time series of an indefinite inner product along two trajectories, with its drift."""

    columns = ["t", "inner"]

    def __init__(self, times, inner_products, drift=None, format="csv", header=None):
        self.drift = drift
        rows = [{"t": float(t), "inner": complex(val)} for t, val in zip(times, inner_products)]
        super().__init__(rows, format=format, header=header)

    def _split_flags(self):
        return [False, True]

    def _flat_columns(self):
        return ["t", "re", "im"]

    def summary(self):
        return {} if self.drift is None else {"drift": self.drift}


class SweepReport(TableReport):
    """Spectrum classification over a sweep of model parameters, one row per parameter value."""

    columns = ["alpha", "classification", "real_pairs", "imaginary_pairs", "boundary_modes", "min_d"]

    def transitions(self):
        # type: () -> List[float]
        """Returns the parameter values at which the classification changes from the previous row."""
        return [row["alpha"] for prev, row in zip(self.rows[:-1], self.rows[1:])
                if row["classification"] != prev["classification"]]


class SpectralMapReport(TableReport):
    """Checks of the eigenvector correspondence between pseudo-supersymmetric partners.

    Rows hold the side (``plus`` for ``H_+`` mapped by ``D``, ``minus`` for ``H_-`` mapped by ``D#``), the
    level index and eigenvalue, the image norm, the zero-mode flag, the eigen-residual of the image and the
    relative distance to the nearest partner eigenvalue.
    """

    columns = ["side", "index", "eigenvalue", "image_norm", "zero_mode", "residual", "partner_distance"]

    @property
    def zero_modes(self):
        # type: () -> List[Dict[str, Any]]
        return [row for row in self.rows if row["zero_mode"]]

    @property
    def max_residual(self):
        # type: () -> float
        return max([row["residual"] for row in self.rows if not row["zero_mode"]], default=0.0)

    @property
    def max_partner_distance(self):
        # type: () -> float
        return max([row["partner_distance"] for row in self.rows if not row["zero_mode"]], default=0.0)

    def summary(self):
        return {
            "zero_modes": len(self.zero_modes),
            "max_residual": self.max_residual,
            "max_partner_distance": self.max_partner_distance,
        }
