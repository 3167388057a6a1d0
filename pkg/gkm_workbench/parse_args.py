"""
Command-line argument parsing for the GKM workbench.

Every subcommand shares the same option set; options a subcommand does not
use are ignored by it.
"""

import argparse

COMMANDS = ("series", "residues", "verify-theta", "short-vectors", "holes", "covering-radius",
            "cartan", "mult-table", "verify-all")


def build_parser():
    """Build the argument parser.

    Returns:
        argparse.ArgumentParser: The parser.
    """
    parser = argparse.ArgumentParser(prog="gkm_workbench",
                                     description="GKM workbench - fixed-point lattices, holes and root multiplicities")

    parser.add_argument("command", choices=COMMANDS, help="Subcommand to run")

    # Problem selection
    parser.add_argument("-n", "--N", dest="N", type=int, default=None,
                        help="Order of the automorphism (2, 3, 5, 7, 11 or 23)")
    parser.add_argument("-a", "--algebra", dest="algebra", type=str, default=None,
                        help="Hyperbolic algebra for cartan and mult-table (e.g. AE3, H71, T433)")
    parser.add_argument("-c", "--compare", dest="compare", type=str, default=None, choices=["appendix-b"],
                        help="Replay every shipped appendix table")

    # Bounds
    parser.add_argument("-o", "--order", dest="order", type=int, default=None,
                        help="Truncation order of q-series (exponents below this are exact)")
    parser.add_argument("-mn", "--max-norm", dest="max_norm", type=int, default=None,
                        help="Largest -norm of multiplicity rows, or the norm bound for short-vectors")
    parser.add_argument("-mh", "--max-height", dest="max_height", type=int, default=None,
                        help="Largest coefficient sum of multiplicity rows")
    parser.add_argument("-sp", "--samples", dest="samples", type=int, default=200,
                        help="Sample size for the randomized checks")

    # Output and execution
    parser.add_argument("-e", "--emit", dest="emit", type=str, default="tsv", choices=["tsv", "json"],
                        help="Output format (default: tsv)")
    parser.add_argument("-od", "--output-dir", dest="output_dir", type=str, default=None,
                        help="Directory for result files (default: GKM_OUTPUT_DIR or ./output)")
    parser.add_argument("-j", "--jobs", dest="jobs", type=int, default=1,
                        help="Worker threads for enumerations")
    parser.add_argument("-s", "--seed", dest="seed", type=int, default=0,
                        help="Seed for every randomized step")
    parser.add_argument("-sl", "--slow", dest="slow", action="store_true",
                        help="Include the long-running criteria in verify-all")
    parser.add_argument("-nc", "--no-cache", dest="no_cache", action="store_true",
                        help="Ignore cached hole enumerations")

    # Logging options
    parser.add_argument("-l", "--log-file", dest="log_file", type=str,
                        default="gkm_workbench.log",
                        help="Path to the log file (default: gkm_workbench.log)")
    parser.add_argument("-ll", "--log-level", dest="log_level", type=str,
                        default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="Logging level")
    return parser


def parse_args(argv=None):
    """Parse command-line arguments.

    Args:
        argv (list, optional): Argument list; defaults to ``sys.argv[1:]``.

    Returns:
        dict: Parsed arguments.
    """
    args = vars(build_parser().parse_args(argv))
    return args
