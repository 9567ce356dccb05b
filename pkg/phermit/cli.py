"""
Command-line module, for use with a ``__main__`` entrypoint.

This module contains the functions behind each subcommand of the toolkit: the certification of a matrix
given in a JSON file (``check``), the reproduction of the reference scenarios (``demo``), the
Wheeler-DeWitt spectrum and scale factor sweeps (``wdw``), the pseudo-supersymmetric polynomial family
(``susy``), and the integration of the Schrödinger equation with indefinite inner product monitoring
(``evolve``). Every command writes its reports (with a reproducibility header) to the output directory.

Exit codes: 0 on success, 1 on usage or I/O errors, 2 for spectra that are not pseudo-Hermitian, and 3
for defective (non-diagonalizable) matrices.
"""

import argparse
import logging
import os
from typing import Any, Union

import numpy as np

import phermit
from phermit.algebra.biorthogonal import (DEFAULT_PAIR_TOL, NOT_PSEUDO_HERMITIAN, DefectiveMatrixError,
                                          NotPseudoHermitianError, certify, is_pt_symmetric)
from phermit.algebra.operators import DEFAULT_TOL, as_metric, pseudo_hermiticity_residual
from phermit.evolution import evolve, inner_product_drift
from phermit.models import discretize, psusy, wdw
from phermit.reports import CertificateReport, ResidualReport, SpectrumReport, TableReport, TrajectoryReport

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_PSEUDO_HERMITIAN = 2
EXIT_DEFECTIVE = 3

FORMAT_CHOICES = ("csv", "json", "text")
DEMO_CHOICES = ("pt-examples", "wdw", "susy-poly")
WDW_ACTIONS = ("spectrum", "sweep")

# arguments that only drive the logger or the config loading, never copied into the run config
_SESSION_ARGS = ("version", "log", "verbose", "silent", "force_stdout", "config")


class RunConfig:
    """Parameters of a single command execution.

    Values come (in increasing priority) from built-in defaults, from an optional YAML/JSON config file, and
    from explicit command-line flags.

    Attributes:
        command: name of the subcommand.
        tol: tolerance for algebraic identities.
        pair_tol: tolerance for eigenvalue reality and conjugate pairing decisions.
        seed: seed of the random generator (recorded in every output header).
        format: output format of tabular reports (``csv``, ``json`` or ``text``).
        out_dir: directory where outputs are written.
        params: subcommand-specific parameters (grid, model, input paths).
    """

    def __init__(self, command, tol=DEFAULT_TOL, pair_tol=DEFAULT_PAIR_TOL, seed=0, format="csv", out_dir=".",
                 **params):
        if not (tol > 0 and pair_tol > 0):
            raise AssertionError(f"tolerances should be strictly positive (got tol={tol}, pair_tol={pair_tol})")
        if format not in FORMAT_CHOICES:
            raise AssertionError(f"unknown output format '{format}' (expected one of {FORMAT_CHOICES})")
        self.command = command
        self.tol = float(tol)
        self.pair_tol = float(pair_tol)
        self.seed = int(seed)
        self.format = format
        self.out_dir = out_dir
        self.params = params

    @staticmethod
    def from_args(args):
        # type: (argparse.Namespace) -> RunConfig
        """Builds the run config from parsed arguments, loading the ``--config`` file first if provided."""
        params = {}
        if getattr(args, "config", None):
            phermit.logger.debug("parsing config at '%s'" % args.config)
            params.update(phermit.utils.load_config(args.config))
        params.update({key: val for key, val in vars(args).items() if val is not None and key not in _SESSION_ARGS})
        command = params.pop("mode", None)
        return RunConfig(command, **params)

    def get(self, key, default=None):
        # type: (str, Any) -> Any
        return phermit.utils.get_key_def(key, self.params, default)

    @property
    def tolerances(self):
        return {"tol": self.tol, "pair_tol": self.pair_tol}

    def header(self, **extra):
        """Returns the reproducibility header of this run."""
        return phermit.utils.get_run_header(seed=self.seed, tolerances=self.tolerances, command=self.command, **extra)

    def output_prefix(self, name):
        # type: (str) -> str
        return phermit.utils.get_output_path(self.out_dir, name)

    def to_dict(self):
        # type: () -> phermit.typedefs.ConfigDict
        """Returns the effective parameters, in a form accepted back by ``--config``."""
        return {"mode": self.command, "tol": self.tol, "pair_tol": self.pair_tol, "seed": self.seed,
                "format": self.format, "out_dir": self.out_dir, **self.params}

    def save(self):
        # type: () -> str
        """Writes the effective parameters as YAML in the output directory, and returns the file path."""
        path = self.output_prefix(f"{self.command}_config.yml")
        phermit.utils.save_config(self.to_dict(), path, default_flow_style=False)
        return path

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(command={repr(self.command)}, tol={self.tol}, pair_tol={self.pair_tol}, seed={self.seed}, " + \
               f"format={repr(self.format)}, out_dir={repr(self.out_dir)}, params={repr(self.params)})"


def _stem(path):
    return os.path.splitext(os.path.basename(path))[0]


def cmd_check(config, matrix_file, eta_file=None):
    """Certifies the matrix stored in a JSON file.

    With a metric file, only the pseudo-Hermiticity residual is reported. Otherwise, the matrix is
    decomposed, its spectrum is classified, and a metric is constructed and written as a certificate
    (along with the classified spectrum).

    Raises:
        NotPseudoHermitianError: after writing the verdict, if the spectrum has unpaired eigenvalues.
        DefectiveMatrixError: if the matrix is (numerically) not diagonalizable.
    """
    logger = phermit.utils.get_func_logger()
    hamiltonian = phermit.utils.load_matrix(matrix_file)
    header = config.header(input=matrix_file, eta=eta_file)
    prefix = config.output_prefix(_stem(matrix_file))
    if eta_file is not None:
        eta = as_metric(phermit.utils.load_matrix(eta_file), tol=config.tol)
        residual = pseudo_hermiticity_residual(hamiltonian, eta)
        report = ResidualReport({"pseudo_hermiticity": residual}, tol=config.tol, format=config.format, header=header)
        path = report.save(prefix + "_residuals")
        logger.info("pseudo-Hermiticity residual: %.3e (tol=%.1e), saved at '%s'" % (residual, config.tol, path))
        return report
    try:
        certificate = certify(hamiltonian, pair_tol=config.pair_tol, tol=config.tol)
    except NotPseudoHermitianError as e:
        spectrum_class = e.spectrum_class
        verdict = CertificateReport(NOT_PSEUDO_HERMITIAN, unpaired=spectrum_class.eigenvalues[spectrum_class.unpaired],
                                    header=header)
        path = verdict.save(prefix + "_certificate", format="json")
        logger.info("spectrum is not pseudo-Hermitian, verdict saved at '%s'" % path)
        raise
    spectrum = SpectrumReport.from_system(certificate.system, certificate.spectrum_class, format=config.format,
                                          header=header)
    spectrum.save(prefix + "_spectrum")
    report = CertificateReport.from_certificate(certificate, header=header)
    path = report.save(prefix + "_certificate", format="json")
    logger.info("classification: %s, metric residual: %.3e, certificate saved at '%s'"
                % (report.classification, report.residual, path))
    return report


def _pt_examples(config):
    logger = phermit.utils.get_func_logger()
    grid = discretize.make_grid(int(config.get("n_points", 201)), float(config.get("half_width", 10.0)))
    ops = discretize.build_ops(grid)
    h1, h2 = discretize.example_h1(ops), discretize.example_h2(ops)
    standard = discretize.schrodinger_hamiltonian(ops, 0.5, discretize.parse_function("x2"),
                                                  discretize.parse_function("x3"))
    residuals = {
        "h1_pt": is_pt_symmetric(h1, ops.Par),
        "h1_parity_pseudo_hermiticity": pseudo_hermiticity_residual(h1, ops.Par),
        "h2_pt": is_pt_symmetric(h2, ops.Par),
        "h2_parity_pseudo_hermiticity": pseudo_hermiticity_residual(h2, ops.Par),
        "standard_pt": is_pt_symmetric(standard, ops.Par),
        "standard_parity_pseudo_hermiticity": pseudo_hermiticity_residual(standard, ops.Par),
    }
    report = ResidualReport(residuals, tol=config.tol, format=config.format, header=config.header(grid=repr(grid)))
    path = report.save(config.output_prefix("pt_examples"))
    for name, val in residuals.items():
        logger.info("%s residual: %.3e" % (name, val))
    logger.info("residual table saved at '%s'" % path)
    return report


def _wdw_model(config, defaults=None):
    defaults = defaults or {}
    return wdw.WdwModel(
        kappa=int(config.get("kappa", defaults.get("kappa", 0))),
        mass=float(config.get("mass", defaults.get("mass", 1.0))),
        alpha=float(config.get("alpha", defaults.get("alpha", 0.0))),
        n_points=int(config.get("n_points", wdw.DEFAULT_N_POINTS)),
        half_width=config.get("half_width", None),
    )


def _wdw_spectrum(config, model):
    logger = phermit.utils.get_func_logger()
    analysis = wdw.wdw_mode_analysis(model, pair_tol=config.pair_tol)
    header = config.header(kappa=model.kappa, mass=model.mass, alpha=model.alpha, grid=repr(model.phi_grid))
    report = SpectrumReport(analysis.eigenvalues, analysis.spectrum_class, format=config.format, header=header)
    path = report.save(config.output_prefix("wdw_spectrum"))
    logger.info("classification at alpha=%g: %s (%d real pairs, %d imaginary pairs, %d boundary modes)"
                % (model.alpha, analysis.classification, analysis.count("real"), analysis.count("imaginary"),
                   analysis.count("boundary")))
    for mode_idx in range(min(4, analysis.d_eigenvalues.size)):
        logger.info("mode %d: +/-%s" % (mode_idx, analysis.eigenvalues[2 * mode_idx]))
    logger.info("spectrum saved at '%s'" % path)
    return report


def _parse_alpha_range(spec):
    tokens = str(spec).split(":")
    if len(tokens) != 3:
        raise AssertionError(f"invalid alpha range '{spec}' (expected <start>:<stop>:<count>)")
    try:
        start, stop, count = float(tokens[0]), float(tokens[1]), int(tokens[2])
    except ValueError:
        raise AssertionError(f"invalid alpha range '{spec}' (expected <start>:<stop>:<count>)")
    assert count >= 1, "alpha range count should be positive"
    return np.linspace(start, stop, count)


def cmd_wdw(config, action="spectrum"):
    """Computes the spectrum of the Wheeler-DeWitt Hamiltonian, or sweeps its classification over alpha."""
    logger = phermit.utils.get_func_logger()
    model = _wdw_model(config)
    if action == "spectrum":
        return _wdw_spectrum(config, model)
    if action != "sweep":
        raise AssertionError(f"unknown wdw action '{action}' (expected one of {WDW_ACTIONS})")
    alphas = _parse_alpha_range(config.get("alpha_range", "-1:1:21"))
    report = wdw.wdw_sweep(model, alphas, pair_tol=config.pair_tol, progress=True)
    report.header = config.header(kappa=model.kappa, mass=model.mass, grid=repr(model.phi_grid))
    report.solve_format(config.format)
    path = report.save(config.output_prefix("wdw_sweep"))
    transitions = report.transitions()
    if transitions:
        logger.info("classification changes at alpha in %s" % ", ".join([f"{a:.4g}" for a in transitions]))
    if model.kappa == 1:
        logger.info("analytic reality boundary of mode 0: alpha=%.4g" % wdw.wdw_reality_boundary(model, 0))
    logger.info("sweep saved at '%s'" % path)
    return report


def _susy_data(config):
    xi_spec = config.get("xi", "poly:1:1")
    grid = discretize.make_grid(int(config.get("n_points", 401)), float(config.get("half_width", 8.0)))
    return psusy.FirstOrderData(grid, psusy.parse_xi(xi_spec), float(config.get("lam", 1.0)),
                                f_minus=discretize.parse_function(config.get("f_minus", "zero")))


def cmd_susy(config, data=None):
    """Builds the pseudo-supersymmetric partners of the polynomial family and checks their properties.

    The partner spectra are compared without the zero modes of ``D`` and ``D#``, which have no partner.
    """
    logger = phermit.utils.get_func_logger()
    data = psusy.hermitian_plus_condition(data if data is not None else _susy_data(config))
    pair = psusy.xi_family_pair(data)
    n_levels = psusy.resolved_levels(data.grid.n_points)
    header = config.header(xi=config.get("xi", "poly:1:1"), lam=data.lam, f_minus=config.get("f_minus", "zero"),
                           grid=repr(data.grid), levels=n_levels)
    e_plus, e_minus = psusy.partner_levels(pair, n_levels=n_levels)
    rows = [{"level": idx, "E_plus": complex(ep), "E_minus": complex(em)} for idx, (ep, em) in enumerate(zip(e_plus, e_minus))]
    spectra = TableReport(rows, format=config.format, header=header)
    spectra.save(config.output_prefix("susy_spectra"))
    residuals = pair.residuals()
    residuals["H_plus_hermiticity"] = float(np.linalg.norm(pair.H_plus - pair.H_plus.conj().T) / np.linalg.norm(pair.H_plus))
    residuals["H_minus_pt"] = is_pt_symmetric(pair.H_minus, -pair.eta_minus.op)
    residuals["H_minus_max_imag"] = float(np.max(np.abs(e_minus.imag)))
    residuals["isospectrality"] = psusy.isospectrality_residual(e_plus, e_minus)
    ResidualReport(residuals, tol=config.tol, format=config.format, header=header).save(config.output_prefix("susy_residuals"))
    mapping = psusy.spectral_map(pair, n_levels=n_levels)
    mapping.header = header
    mapping.solve_format(config.format)
    path = mapping.save(config.output_prefix("susy_spectral_map"))
    logger.info("lowest partner levels: %s" % ", ".join([f"{val.real:.6g}" for val in e_plus[:6]]))
    logger.info("H_+ hermiticity: %.3e, H_- PT residual: %.3e, max |Im E_-|: %.3e, isospectrality: %.3e"
                % (residuals["H_plus_hermiticity"], residuals["H_minus_pt"], residuals["H_minus_max_imag"],
                   residuals["isospectrality"]))
    logger.info("%d zero mode(s), spectral map saved at '%s'" % (len(mapping.zero_modes), path))
    return mapping


def cmd_demo(config, name):
    """Reproduces one of the reference scenarios (``pt-examples``, ``wdw`` or ``susy-poly``)."""
    if name == "pt-examples":
        return _pt_examples(config)
    if name == "wdw":
        return _wdw_spectrum(config, _wdw_model(config, defaults={"kappa": 1, "alpha": 0.5}))
    if name == "susy-poly":
        config.params.setdefault("xi", f"poly:{int(config.get('n', 1))}:{float(config.get('ell', 1.0))}")
        return cmd_susy(config)
    raise AssertionError(f"unknown demo '{name}' (expected one of {DEMO_CHOICES})")


def cmd_evolve(config, matrix_file, eta_file):
    """Evolves two seeded random states and reports their indefinite inner product over time."""
    logger = phermit.utils.get_func_logger()
    hamiltonian = phermit.utils.load_matrix(matrix_file)
    eta = as_metric(phermit.utils.load_matrix(eta_file), tol=config.tol)
    rng = np.random.default_rng(config.seed)
    dim = hamiltonian.shape[0]
    psi1, psi2 = [rng.standard_normal(dim) + 1j * rng.standard_normal(dim) for _ in range(2)]
    t_final, dt = float(config.get("t_final", 10.0)), float(config.get("dt", 1e-3))
    traj1 = evolve(hamiltonian, psi1, t_final, dt)
    traj2 = evolve(hamiltonian, psi2, t_final, dt)
    drift = inner_product_drift(traj1, traj2, eta)
    residual = pseudo_hermiticity_residual(hamiltonian, eta)
    header = config.header(input=matrix_file, eta=eta_file, t_final=t_final, dt=dt, residual=residual)
    report = TrajectoryReport(traj1.times, traj1.inner_products(traj2, eta), drift=drift, format=config.format,
                              header=header)
    path = report.save(config.output_prefix(_stem(matrix_file) + "_trajectory"))
    logger.info("inner product drift: %.3e (pseudo-Hermiticity residual: %.3e), trajectory saved at '%s'"
                % (drift, residual, path))
    return report


def _add_grid_args(ap):
    ap.add_argument("--n-points", default=None, type=int, help="number of grid nodes (odd)")
    ap.add_argument("--half-width", default=None, type=float, help="grid half-width L")


def _add_wdw_args(ap):
    ap.add_argument("--kappa", default=None, type=int, choices=[-1, 0, 1], help="spatial curvature")
    ap.add_argument("--mass", default=None, type=float, help="scalar field mass")
    ap.add_argument("--alpha", default=None, type=float, help="logarithm of the scale factor")


def _add_susy_args(ap):
    ap.add_argument("--lambda", dest="lam", default=None, type=float, help="nonzero coefficient of exp(xi)")
    ap.add_argument("--f-minus", default=None, type=str, help="odd part of f (zero, x, x3 or poly:c0,c1,...)")


def make_argparser():
    # type: () -> argparse.ArgumentParser
    """Creates the (default) argument parser to use for the main entrypoint."""
    ap = argparse.ArgumentParser(description="phermit pseudo-Hermitian quantum mechanics toolkit")
    ap.add_argument("--version", default=False, action="store_true", help="prints the version of the library and exits")
    ap.add_argument("-l", "--log", default=None, type=str, help="path to the top-level log file (default: None)")
    ap.add_argument("-v", "--verbose", action="count", default=0, help="set logging terminal verbosity level (additive)")
    ap.add_argument("--silent", action="store_true", default=False, help="deactivates all console logging activities")
    ap.add_argument("--force-stdout", action="store_true", default=False, help="force logging output to stdout instead of stderr")
    ap.add_argument("--config", default=None, type=str, help="path to a YAML/JSON file of default parameters")
    ap.add_argument("--tol", default=None, type=float, help=f"tolerance for algebraic identities (default: {DEFAULT_TOL})")
    ap.add_argument("--pair-tol", default=None, type=float, help=f"eigenvalue pairing tolerance (default: {DEFAULT_PAIR_TOL})")
    ap.add_argument("--seed", default=None, type=int, help="random generator seed (default: 0)")
    ap.add_argument("--format", default=None, type=str, choices=FORMAT_CHOICES, help="report format (default: csv)")
    ap.add_argument("--out-dir", default=None, type=str, help="output directory (default: current directory)")
    subparsers = ap.add_subparsers(title="Operating mode", dest="mode")
    check_ap = subparsers.add_parser("check", help="certifies the pseudo-Hermiticity of a matrix JSON file")
    check_ap.add_argument("matrix_file", type=str, help="path to the matrix JSON file")
    check_ap.add_argument("--eta", default=None, type=str, help="path to a metric JSON file (residual check only)")
    demo_ap = subparsers.add_parser("demo", help="reproduces a reference scenario")
    demo_ap.add_argument("name", type=str, choices=DEMO_CHOICES, help="name of the scenario")
    demo_ap.add_argument("--n", default=None, type=int, help="power of the polynomial exponent (susy-poly)")
    demo_ap.add_argument("--ell", default=None, type=float, help="length scale of the polynomial exponent (susy-poly)")
    _add_grid_args(demo_ap)
    _add_wdw_args(demo_ap)
    _add_susy_args(demo_ap)
    wdw_ap = subparsers.add_parser("wdw", help="Wheeler-DeWitt two-component model spectrum or alpha sweep")
    wdw_ap.add_argument("action", nargs="?", default="spectrum", choices=WDW_ACTIONS, help="operation to run")
    _add_grid_args(wdw_ap)
    _add_wdw_args(wdw_ap)
    wdw_ap.add_argument("--alpha-range", default=None, type=str, help="sweep range as <start>:<stop>:<count>")
    susy_ap = subparsers.add_parser("susy", help="pseudo-supersymmetric partners of the polynomial family")
    susy_ap.add_argument("--xi", default=None, type=str, help="exponent as poly:<n>:<ell> (default: poly:1:1)")
    _add_grid_args(susy_ap)
    _add_susy_args(susy_ap)
    evolve_ap = subparsers.add_parser("evolve", help="evolves two random states and monitors their eta inner product")
    evolve_ap.add_argument("matrix_file", type=str, help="path to the Hamiltonian matrix JSON file")
    evolve_ap.add_argument("--eta", required=True, type=str, help="path to the metric JSON file")
    evolve_ap.add_argument("--t-final", default=None, type=float, help="final time (default: 10)")
    evolve_ap.add_argument("--dt", default=None, type=float, help="time step (default: 1e-3)")
    return ap


def setup(args=None, argparser=None):
    # type: (Any, argparse.ArgumentParser) -> Union[int, argparse.Namespace]
    """Sets up the argument parser (if not already done externally) and parses the input CLI arguments.

    This function may return an error code (integer) if the program should exit immediately. Otherwise, it will return
    the parsed arguments to use in order to redirect the execution flow of the entrypoint.
    """
    argparser = argparser or make_argparser()
    try:
        args = argparser.parse_args(args=args)
    except SystemExit as e:
        # argparse exits with code 2 on usage errors, which is reserved for verdicts here
        return EXIT_OK if not e.code else EXIT_USAGE
    if args.version:
        print(phermit.__version__)
        return EXIT_OK
    if args.mode is None:
        argparser.print_help()
        return EXIT_USAGE
    if args.silent and args.verbose > 0:
        raise AssertionError("contradicting verbose/silent arguments provided")
    log_level = logging.INFO if args.verbose < 1 else logging.DEBUG if args.verbose < 2 else logging.NOTSET
    if args.silent:
        log_level = logging.CRITICAL + 1
    phermit.utils.init_logger(log_level, args.log, args.force_stdout)
    return args


def main(args=None, argparser=None):
    """Main entrypoint to use with console applications.

    This function parses command line arguments and dispatches the execution based on the selected
    operating mode. Run with ``--help`` for information on the available arguments.

    .. seealso::
        | :func:`phermit.cli.cmd_check`
        | :func:`phermit.cli.cmd_demo`
        | :func:`phermit.cli.cmd_wdw`
        | :func:`phermit.cli.cmd_susy`
        | :func:`phermit.cli.cmd_evolve`
    """
    args = setup(args=args, argparser=argparser)
    if isinstance(args, int):
        return args  # CLI must exit immediately with provided error code
    try:
        config = RunConfig.from_args(args)
        phermit.logger.debug("run config: %s" % repr(config))
        phermit.logger.debug("run config saved at '%s'" % config.save())
        if args.mode == "check":
            cmd_check(config, args.matrix_file, args.eta)
        elif args.mode == "demo":
            cmd_demo(config, args.name)
        elif args.mode == "wdw":
            cmd_wdw(config, args.action)
        elif args.mode == "susy":
            cmd_susy(config)
        else:  # if args.mode == "evolve":
            cmd_evolve(config, args.matrix_file, args.eta)
    except NotPseudoHermitianError as e:
        phermit.logger.error(str(e))
        return EXIT_NOT_PSEUDO_HERMITIAN
    except DefectiveMatrixError as e:
        phermit.logger.error(str(e))
        return EXIT_DEFECTIVE
    except (AssertionError, OSError, ValueError) as e:
        phermit.logger.error(str(e))
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    main()
