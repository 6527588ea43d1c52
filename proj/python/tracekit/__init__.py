"""Happens-before analysis, trace monitors and asynchronous automata."""

from ._tracekit import (
    Automaton,
    Execution,
    InputError,
    ResourceError,
    check_locally_rejecting,
    check_nonblocking,
    check_trace_closed,
    detect_atomicity_violations,
    detect_races,
    dfa_is_trace_closed,
    digest,
    foata_normal_form,
    gossip_replay,
    happens_before,
    is_deterministic,
    is_serializable,
    parse_log,
    run,
    trace_dot,
    trace_equivalent,
)

__version__ = "0.1.0"


def load_log(path):
    with open(path, encoding="utf-8") as f:
        return parse_log(f.read())


def load_automaton(path):
    with open(path, encoding="utf-8") as f:
        return Automaton.from_json(f.read())
