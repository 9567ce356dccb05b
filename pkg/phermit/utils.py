"""General utilities module.

This module only contains non-numerical helpers: logger setup, configuration i/o, key lookups,
reproducibility stamps, and the matrix JSON codec used by the command-line front end.
"""
import inspect
import json
import logging
import os
import platform
import re
import sys
import time
from typing import TYPE_CHECKING

import numpy as np
import yaml

import phermit.typedefs  # noqa: F401

if TYPE_CHECKING:
    from typing import Any, AnyStr, Dict, List, Optional  # noqa: F401

logger = logging.getLogger(__name__)
fixed_yaml_parsing = False


class MatrixFormatError(AssertionError):
    """Raised when a matrix JSON document cannot be decoded into a dense complex matrix.

    Attributes:
        path: path of the offending file (if any).
        field: name of the offending field (``dim``, ``re``, ``im``), or ``None`` for syntax errors.
        line: line number of a syntax error reported by the JSON decoder (if any).
    """

    def __init__(self, msg, path=None, field=None, line=None):
        # type: (str, Optional[str], Optional[str], Optional[int]) -> None
        self.path = path
        self.field = field
        self.line = line
        prefix = f"{path}: " if path else ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"field '{field}': "
        super().__init__(prefix + msg)


def init_logger(log_level=logging.NOTSET, filename=None, force_stdout=False):
    """Initializes the package logger with a specific filter level, and optional file output."""
    import phermit
    if getattr(phermit, "LOGGER_INITIALIZED", None) is None:
        logging.getLogger().setLevel(logging.NOTSET)
        phermit.logger.propagate = 0
        logger_format = logging.Formatter("[%(asctime)s - %(name)s] %(levelname)s : %(message)s")
        if filename is not None:
            logger_fh = logging.FileHandler(filename)
            logger_fh.setLevel(logging.NOTSET)
            logger_fh.setFormatter(logger_format)
            phermit.logger.addHandler(logger_fh)
        stream = sys.stdout if force_stdout else None
        logger_ch = logging.StreamHandler(stream=stream)
        logger_ch.setLevel(log_level)
        logger_ch.setFormatter(logger_format)
        phermit.logger.addHandler(logger_ch)
        setattr(phermit, "LOGGER_INITIALIZED", True)


def get_func_logger(skip=0):
    """Shorthand to get logger for current function frame."""
    return logging.getLogger(get_caller_name(skip + 1))


def get_caller_name(skip=2):
    """Returns the name of a caller in the format module.class.method.

    Args:
        skip: specifies how many levels of stack to skip while getting the caller.

    Returns:
        An empty string is returned if skipped levels exceed stack height; otherwise,
        returns the requested caller name.
    """
    frame_list = []
    # noinspection PyProtectedMember
    frame = sys._getframe(1)
    while frame:
        frame_list.append(frame)
        frame = frame.f_back
    if len(frame_list) < skip + 1:
        return ""
    parent_frame = frame_list[skip]
    name = []
    module = inspect.getmodule(parent_frame)
    if module:
        name.append(module.__name__)
    if "self" in parent_frame.f_locals:
        name.append(parent_frame.f_locals["self"].__class__.__name__)
    codename = parent_frame.f_code.co_name
    if codename != "<module>":
        name.append(codename)
    del parent_frame
    return ".".join(name)


def get_key_def(key, config, default=None):
    """Returns a value given a dictionary key (or list of candidate keys), or the default value."""
    keys = key if isinstance(key, list) else [key]
    for k in keys:
        if config is not None and k in config and config[k] is not None:
            return config[k]
    return default


def get_log_stamp():
    """Returns a print-friendly and filename-friendly identification string containing platform and time."""
    return str(platform.node()) + "-" + time.strftime("%Y%m%d-%H%M%S")


def get_git_stamp():
    """Returns a print-friendly SHA signature for the package's underlying git repository (if found)."""
    try:
        import git
        try:
            repo = git.Repo(path=os.path.abspath(__file__), search_parent_directories=True)
            return str(repo.head.object.hexsha)
        except (AttributeError, ValueError, git.InvalidGitRepositoryError, git.NoSuchPathError):
            return "unknown"
    except (ImportError, AttributeError):
        return "unknown"


def load_config(path):
    # type: (str) -> phermit.typedefs.ConfigDict
    """Loads a run configuration dictionary from the provided YAML or JSON path.

    The YAML loader is patched once so that scientific notation without a decimal point (e.g. ``1e-10``)
    is parsed as a float instead of a string, which matters for tolerance values.
    """
    global fixed_yaml_parsing
    if not fixed_yaml_parsing:
        # https://stackoverflow.com/questions/30458977/yaml-loads-5e-6-as-string-and-not-a-number
        loader = yaml.SafeLoader
        loader.add_implicit_resolver(
            u'tag:yaml.org,2002:float',
            re.compile(u'''^(?:
                 [-+]?(?:[0-9][0-9_]*)\\.[0-9_]*(?:[eE][-+]?[0-9]+)?
                |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
                |\\.[0-9_]+(?:[eE][-+][0-9]+)?
                |[-+]?[0-9][0-9_]*(?::[0-5]?[0-9])+\\.[0-9_]*
                |[-+]?\\.(?:inf|Inf|INF)
                |\\.(?:nan|NaN|NAN))$''', re.X),
            list(u'-+0123456789.'))
        fixed_yaml_parsing = True
    ext = os.path.splitext(path)[-1]
    if ext not in [".json", ".yml", ".yaml"]:
        raise AssertionError(f"unknown config file type: {ext}")
    with open(path) as fd:
        config = yaml.safe_load(fd)  # also supports json
    if config is None:
        config = {}
    if not isinstance(config, dict):
        raise AssertionError(f"config file '{path}' should contain a dictionary at its root")
    return config


def save_config(config, path, **kwargs):
    # type: (phermit.typedefs.ConfigDict, str, **Any) -> None
    """Saves the given configuration dictionary to the provided JSON or YAML path.

    Non-serializable objects are converted to strings in JSON outputs.
    """
    ext = os.path.splitext(path)[-1]
    if ext not in [".json", ".yml", ".yaml"]:
        raise AssertionError(f"unknown output file type: {ext}")
    with open(path, "w") as fd:
        kwargs.setdefault("indent", 4)
        if ext == ".json":
            kwargs.setdefault("default", lambda x: str(x))
            kwargs.setdefault("sort_keys", False)
            json.dump(config, fd, **kwargs)
        else:
            yaml.dump(config, fd, **kwargs)


def get_output_path(out_dir, file_name):
    # type: (Optional[str], str) -> str
    """Returns the path of an output file, creating the output directory if needed."""
    out_dir = out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, file_name)


def get_run_header(seed=None, tolerances=None, **extra):
    # type: (Optional[int], Optional[Dict[str, float]], **Any) -> Dict[str, Any]
    """Returns the reproducibility header attached to every output (version, seed, tolerances, stamps)."""
    import phermit
    header = {
        "version": phermit.__version__,
        "seed": seed,
        "tolerances": dict(tolerances or {}),
        "stamp": get_log_stamp(),
        "git": get_git_stamp(),
    }
    header.update(extra)
    return header


def header_to_lines(header, prefix="# "):
    # type: (Dict[str, Any], str) -> List[str]
    """Flattens a run header into comment lines for text-based outputs (e.g. CSV)."""
    lines = []
    for key, val in header.items():
        if isinstance(val, dict):
            val = ", ".join([f"{k}={v}" for k, v in val.items()])
        lines.append(f"{prefix}{key}: {val}")
    return lines


def matrix_to_dict(matrix):
    # type: (np.ndarray) -> phermit.typedefs.JSON
    """Encodes a square matrix in the row-major ``{"dim", "re", "im"}`` JSON layout."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise AssertionError(f"expected square matrix, got shape {matrix.shape}")
    return {
        "dim": int(matrix.shape[0]),
        "re": np.real(matrix).tolist(),
        "im": np.imag(matrix).tolist(),
    }


def matrix_from_dict(data, path=None):
    # type: (phermit.typedefs.JSON, Optional[str]) -> np.ndarray
    """Decodes a dense complex matrix from the ``{"dim", "re", "im"}`` JSON layout.

    Ragged rows, mismatched row counts, missing fields and non-numeric entries are all rejected with
    a :class:`MatrixFormatError` naming the offending field and row.
    """
    if not isinstance(data, dict):
        raise MatrixFormatError("root element should be an object", path=path)
    if "dim" not in data:
        raise MatrixFormatError("missing field", path=path, field="dim")
    dim = data["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise MatrixFormatError(f"expected positive integer, got {repr(dim)}", path=path, field="dim")
    parts = []
    for field in ["re", "im"]:
        if field not in data:
            raise MatrixFormatError("missing field", path=path, field=field)
        rows = data[field]
        if not isinstance(rows, list) or len(rows) != dim:
            count = len(rows) if isinstance(rows, list) else "no"
            raise MatrixFormatError(f"expected {dim} rows, got {count}", path=path, field=field)
        for row_idx, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != dim:
                count = len(row) if isinstance(row, list) else "no"
                raise MatrixFormatError(f"row {row_idx} has {count} entries, expected {dim}", path=path, field=field)
            for col_idx, val in enumerate(row):
                if isinstance(val, bool) or not isinstance(val, (int, float)):
                    raise MatrixFormatError(f"non-numeric entry {repr(val)} at row {row_idx}, column {col_idx}",
                                            path=path, field=field)
        parts.append(np.asarray(rows, dtype=np.float64))
    matrix = parts[0] + 1j * parts[1]
    if not np.all(np.isfinite(matrix)):
        raise MatrixFormatError("matrix contains non-finite entries", path=path)
    return matrix


def load_matrix(path):
    # type: (str) -> np.ndarray
    """Loads a dense complex matrix from a matrix JSON file."""
    if not os.path.isfile(path):
        raise MatrixFormatError("file not found", path=path)
    with open(path) as fd:
        try:
            data = json.load(fd)
        except json.JSONDecodeError as e:
            raise MatrixFormatError(f"invalid JSON ({e.msg}, column {e.colno})", path=path, line=e.lineno)
    return matrix_from_dict(data, path=path)


def save_matrix(matrix, path, header=None):
    # type: (np.ndarray, str, Optional[Dict[str, Any]]) -> None
    """Saves a dense complex matrix to a matrix JSON file (with an optional run header)."""
    data = matrix_to_dict(matrix)
    if header is not None:
        data = {"header": header, **data}
    with open(path, "w") as fd:
        json.dump(data, fd, indent=4)
