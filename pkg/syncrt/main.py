#!/usr/bin/env python

"""
syncrt/main.py

===============================================================================

    Copyright © 2020-2026 the syncrt authors.

    This file is part of syncrt, a compiler and schedule simulator for
    multi-periodic synchronous data-flow programs.

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.

===============================================================================

**Command-line entry point:** ``syncrt compile | simulate | check``.

Exit codes:

- 0: success;
- 1: the program was rejected by the compiler;
- 2: the simulation missed a deadline, read a wrong value, or a property
  suite found a violation;
- 3: I/O, configuration or usage error.

"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import glob
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Tuple

from attrdict import AttrDict
from cardinal_pythonlib.argparse_func import nonnegative_int, positive_int
from cardinal_pythonlib.logs import configure_logger_for_colour
import colorama
from colorama import Fore, Style

from syncrt.compiler import CompiledProgram, compile_file
from syncrt.config import load_config, validate_config
from syncrt.constants import (
    EXIT_COMPILE_REJECTED,
    EXIT_IO_ERROR,
    EXIT_SIMULATION_FAILED,
    EXIT_SUCCESS,
    POLICIES,
    SOURCE_EXTENSION,
    TASKSET_EXTENSION,
)
from syncrt.deadlines import EncodedTaskSet
from syncrt.exceptions import CompileError, InternalError, SyncrtError
from syncrt.interp import format_flow
from syncrt.properties import check_program, check_random_programs, \
    check_taskset, SuiteResult
from syncrt.sim import (
    check_semantics,
    render_gantt,
    SimConfig,
    simulate,
    trace_to_jsonl,
)
from syncrt.taskgraph import to_dot
from syncrt.taskset import load_taskset, save_taskset
from syncrt.version import VERSION

log = logging.getLogger(__name__)


# =============================================================================
# Diagnostics
# =============================================================================

def _coloured(text: str, colour: str) -> str:
    if not sys.stderr.isatty():
        return text
    return colour + Style.BRIGHT + text + Style.RESET_ALL


def report_error(e: Exception, label: str = "error") -> None:
    print("{} {}".format(_coloured(label + ":", Fore.RED), e),
          file=sys.stderr)


def exit_code_for(e: Exception) -> int:
    if isinstance(e, (CompileError, InternalError)):
        return EXIT_COMPILE_REJECTED
    return EXIT_IO_ERROR


# =============================================================================
# Configuration from the command line
# =============================================================================

_OVERRIDES = [
    # (argparse destination, config key)
    ("sensor_wcet", "sensor_wcet"),
    ("actuator_wcet", "actuator_wcet"),
    ("tick_limit", "tick_limit"),
    ("policy", "policy"),
    ("horizon", "horizon"),
    ("seed", "seed"),
    ("random", "random_programs"),
]


def config_from_args(args: argparse.Namespace) -> AttrDict:
    """
    The config file (if any), overridden by explicit command-line values.

    Raises:
        :exc:`syncrt.exceptions.ImproperlyConfigured`, :exc:`OSError`
    """
    config = load_config(args.config, log_config=args.verbose)
    for dest, key in _OVERRIDES:
        value = getattr(args, dest, None)
        if value is not None:
            config[key] = value
    validate_config(config)
    return config


def default_output(filename: str) -> str:
    stem = filename
    if stem.endswith(SOURCE_EXTENSION):
        stem = stem[:-len(SOURCE_EXTENSION)]
    return stem + TASKSET_EXTENSION


def is_taskset_file(filename: str) -> bool:
    return filename.endswith(".json")


# =============================================================================
# compile
# =============================================================================

def _compile_one(filename: str, config: Dict[str, Any],
                 main: Optional[str]) -> Tuple[str, int, str]:
    """
    Compiles one file and writes its task set next to it. Runs in a worker
    process for ``compile --all``.
    """
    try:
        compiled = compile_file(filename, main=main, config=AttrDict(config))
        output = default_output(filename)
        save_taskset(compiled.taskset, output)
    except SyncrtError as e:
        return filename, exit_code_for(e), str(e)
    except OSError as e:
        return filename, EXIT_IO_ERROR, str(e)
    return filename, EXIT_SUCCESS, "{} tasks -> {}".format(
        len(compiled.taskset.tasks), output)


def compile_all(directory: str, config: AttrDict, main: Optional[str],
                jobs: int) -> int:
    filenames = sorted(glob.glob(os.path.join(directory,
                                              "*" + SOURCE_EXTENSION)))
    if not filenames:
        report_error("no {} files in {}".format(SOURCE_EXTENSION, directory))
        return EXIT_IO_ERROR
    plain = dict(config)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(_compile_one, filenames,
                                        [plain] * len(filenames),
                                        [main] * len(filenames)))
    else:
        results = [_compile_one(f, plain, main) for f in filenames]
    worst = EXIT_SUCCESS
    for filename, code, message in results:
        if code == EXIT_SUCCESS:
            print("{}: {}".format(filename, message))
        else:
            report_error(message, "rejected" if code ==
                         EXIT_COMPILE_REJECTED else "error")
        worst = max(worst, code)
    return worst


def cmd_compile(args: argparse.Namespace, config: AttrDict) -> int:
    if args.all:
        return compile_all(args.all, config, args.main, args.jobs)
    if not args.file:
        report_error("compile needs a FILE or --all DIR")
        return EXIT_IO_ERROR
    compiled = compile_file(args.file, main=args.main, config=config)
    if args.dump_types:
        for name, signature in compiled.signatures.items():
            print("{}: {}".format(name, signature))
    if args.dump_clocks:
        print("{}: {}".format(compiled.name, compiled.clock_signature()))
    if args.dump_graph:
        print(to_dot(compiled.graph), end="")
    if args.dump_dwords:
        for line in compiled.dword_lines():
            print(line)
    output = args.output or default_output(args.file)
    save_taskset(compiled.taskset, output)
    print("{}: {} tasks, {} buffers, hyperperiod {} -> {}".format(
        compiled.name, len(compiled.taskset.tasks),
        len(compiled.taskset.buffers), compiled.taskset.hyperperiod, output))
    return EXIT_SUCCESS


# =============================================================================
# simulate
# =============================================================================

def load_input(filename: str, config: AttrDict, main: Optional[str]
               ) -> Tuple[EncodedTaskSet, Optional[CompiledProgram]]:
    if is_taskset_file(filename):
        return load_taskset(filename), None
    compiled = compile_file(filename, main=main, config=config)
    return compiled.taskset, compiled


def print_flows(flows: Dict[str, Any], selection: str) -> None:
    """
    Prints ``(tag, value)`` rows for the comma-separated flow names in
    ``selection``, or for every flow if it is empty.
    """
    names = [n for n in selection.split(",") if n] or sorted(flows)
    for name in names:
        if name not in flows:
            log.warning("No flow named {}".format(name))
            continue
        print("{}: {}".format(name, " ".join(format_flow(flows[name]))))


def cmd_simulate(args: argparse.Namespace, config: AttrDict) -> int:
    if args.jitter is not None:
        report_error("--jitter is not supported")
        return EXIT_IO_ERROR
    ts, compiled = load_input(args.file, config, args.main)
    horizon = config.horizon or ts.default_horizon()
    trace = simulate(ts, ts.buffers,
                     SimConfig(horizon=horizon, policy=config.policy))
    if args.gantt:
        log.info("Writing Gantt chart to {}".format(args.gantt))
        with open(args.gantt, "w") as f:
            f.write(render_gantt(trace))
    if args.trace:
        log.info("Writing trace to {}".format(args.trace))
        with open(args.trace, "w") as f:
            f.write(trace_to_jsonl(trace))
    mismatches = []  # type: List
    if compiled is not None:
        oracle = compiled.evaluate(horizon)
        mismatches = check_semantics(trace, oracle, ts)
        if args.trace_flows is not None:
            print_flows(oracle.flows, args.trace_flows)
    else:
        log.warning("No source program: values read are not checked")
    for ev in trace.misses:
        report_error("{}[{}] missed its deadline {}".format(
            ev.task, ev.n, ev.deadline), "miss")
    for m in mismatches:
        report_error(m, "mismatch")
    print("{} misses, {} mismatches over [0,{})".format(
        len(trace.misses), len(mismatches), horizon))
    if trace.misses or mismatches:
        return EXIT_SIMULATION_FAILED
    return EXIT_SUCCESS


# =============================================================================
# check
# =============================================================================

def _print_results(title: str, results: Dict[str, SuiteResult]) -> bool:
    print(title)
    ok = True
    for result in results.values():
        print("  {}".format(result))
        ok = ok and result.ok
    return ok


def cmd_check(args: argparse.Namespace, config: AttrDict) -> int:
    if not args.file and not args.random:
        report_error("check needs a FILE or --random N")
        return EXIT_IO_ERROR
    ok = True
    if args.file:
        ts, compiled = load_input(args.file, config, args.main)
        if compiled is not None:
            results = check_program(compiled, horizon=config.horizon,
                                    policy=config.policy, seed=config.seed)
        else:
            results = check_taskset(ts, horizon=config.horizon,
                                    policy=config.policy, seed=config.seed)
        ok = _print_results(args.file, results) and ok
    if args.random:
        results = check_random_programs(config.random_programs,
                                        seed=config.seed, config=config)
        ok = _print_results("{} random programs (seed {})".format(
            config.random_programs, config.seed), results) and ok
    return EXIT_SUCCESS if ok else EXIT_SIMULATION_FAILED


# =============================================================================
# Argument parsing
# =============================================================================

def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", type=str,
        help="YAML configuration file")
    common.add_argument(
        "--verbose", "-v", action="store_true",
        help="Verbose (debug) logging")
    common.add_argument(
        "--main", type=str,
        help="Main node (default: the last node declared)")
    common.add_argument(
        "--sensor-wcet", dest="sensor_wcet", type=nonnegative_int,
        help="Wcet of sensor tasks (overrides config)")
    common.add_argument(
        "--actuator-wcet", dest="actuator_wcet", type=nonnegative_int,
        help="Wcet of actuator tasks (overrides config)")
    common.add_argument(
        "--tick-limit", dest="tick_limit", type=positive_int,
        help="Largest acceptable number of ticks per time unit")

    parser = argparse.ArgumentParser(
        prog="syncrt",
        description="Compile multi-periodic synchronous programs into "
                    "real-time task sets, and simulate them",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + VERSION)
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    p_compile = subparsers.add_parser(
        "compile", parents=[common],
        help="Compile a program into a task set",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_compile.add_argument(
        "file", nargs="?",
        help="Source file ({})".format(SOURCE_EXTENSION))
    p_compile.add_argument(
        "-o", "--output", type=str,
        help="Task-set file (default: <stem>{} next to the source)".format(
            TASKSET_EXTENSION))
    p_compile.add_argument(
        "--dump-types", dest="dump_types", action="store_true",
        help="Print node type signatures")
    p_compile.add_argument(
        "--dump-clocks", dest="dump_clocks", action="store_true",
        help="Print the main node's clock signature")
    p_compile.add_argument(
        "--dump-graph", dest="dump_graph", action="store_true",
        help="Print the task graph in DOT format")
    p_compile.add_argument(
        "--dump-dwords", dest="dump_dwords", action="store_true",
        help="Print the deadline words")
    p_compile.add_argument(
        "--all", type=str, metavar="DIR",
        help="Compile every {} file in DIR".format(SOURCE_EXTENSION))
    p_compile.add_argument(
        "--jobs", type=positive_int, default=1,
        help="Worker processes for --all")
    p_compile.set_defaults(func=cmd_compile)

    p_simulate = subparsers.add_parser(
        "simulate", parents=[common],
        help="Simulate a program or task set under EDF",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_simulate.add_argument(
        "file",
        help="Source file ({}) or task set ({})".format(
            SOURCE_EXTENSION, TASKSET_EXTENSION))
    p_simulate.add_argument(
        "--policy", choices=POLICIES,
        help="Scheduling policy (default from config: edf-dword)")
    p_simulate.add_argument(
        "--horizon", type=positive_int,
        help="Ticks to simulate (default: max release + 2 hyperperiods)")
    p_simulate.add_argument(
        "--gantt", type=str, metavar="OUT",
        help="Write an ASCII Gantt chart")
    p_simulate.add_argument(
        "--trace", type=str, metavar="OUT",
        help="Write the event trace as JSON lines")
    p_simulate.add_argument(
        "--trace-flows", dest="trace_flows", nargs="?", const="",
        metavar="V1,V2",
        help="Print the reference interpreter's flows (all, or those named)")
    p_simulate.add_argument(
        "--jitter", type=str,
        help="Execution-time variation (not supported)")
    p_simulate.set_defaults(func=cmd_simulate)

    p_check = subparsers.add_parser(
        "check", parents=[common],
        help="Run the property suites on a program and/or random programs",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_check.add_argument(
        "file", nargs="?",
        help="Source file or task set")
    p_check.add_argument(
        "--policy", choices=POLICIES,
        help="Scheduling policy")
    p_check.add_argument(
        "--horizon", type=positive_int,
        help="Ticks to simulate")
    p_check.add_argument(
        "--random", type=nonnegative_int,
        help="Also check this many random programs")
    p_check.add_argument(
        "--seed", type=nonnegative_int,
        help="Seed for the random programs and fault injection")
    p_check.set_defaults(func=cmd_check)
    return parser


def main(argv: List[str] = None) -> int:
    """
    Command-line entry point.
    See ``--help`` for details.
    """
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig()
    configure_logger_for_colour(
        logging.getLogger(),
        level=logging.DEBUG if args.verbose else logging.INFO,
        remove_existing=True)
    colorama.init()
    try:
        config = config_from_args(args)
        return args.func(args, config)
    except CompileError as e:
        report_error(e, "rejected")
        return EXIT_COMPILE_REJECTED
    except InternalError as e:
        report_error(e, "internal error")
        return EXIT_COMPILE_REJECTED
    except SyncrtError as e:
        report_error(e)
        return EXIT_IO_ERROR
    except OSError as e:
        report_error(e)
        return EXIT_IO_ERROR
    finally:
        colorama.deinit()


if __name__ == "__main__":
    sys.exit(main())
