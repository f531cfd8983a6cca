"""Monotone circuits and their reduction to vertex-colored graphs.

Each gate k owns a vertex pair; constant-1 pairs start split (two singleton
colors), every other structural class is one fresh color. And-gates wire a
four-vertex parity gadget onto the two input pairs and the output pair;
or-gates attach two implication gadgets, each a parity gadget on auxiliary
pairs tied to the input pair by double edges. Refinement then splits a gate's
pair exactly when the gate evaluates to 1. The `Gp` variant ties the output
pair back to every constant-0 input pair (discrete iff the circuit is true),
and `Gpp` hangs one more implication gadget off the output pair (additionally
not refinable iff the circuit is false).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GraphFormatError
from .graphs import ColoredGraph
from .refinement import stable_partition

CONST0 = "const0"
CONST1 = "const1"
AND = "and"
OR = "or"

VARIANTS = ("G", "Gp", "Gpp")


@dataclass(frozen=True)
class MonotoneCircuit:
    """Gate list in topological order; gates are ('const0',), ('const1',),
    ('and', i, j) or ('or', i, j) with i, j earlier gate ids."""

    gates: tuple
    output: int

    def __post_init__(self):
        if not self.gates:
            raise GraphFormatError("circuit has no gates")
        for k, gate in enumerate(self.gates):
            op = gate[0]
            if op in (CONST0, CONST1):
                if len(gate) != 1:
                    raise GraphFormatError(f"gate {k}: constants take no inputs")
            elif op in (AND, OR):
                if len(gate) != 3:
                    raise GraphFormatError(f"gate {k}: {op} needs exactly two inputs")
                i, j = gate[1], gate[2]
                if not (0 <= i < k and 0 <= j < k):
                    raise GraphFormatError(f"gate {k}: inputs must reference earlier gates")
            else:
                raise GraphFormatError(f"gate {k}: unknown op {op!r}")
        if not 0 <= self.output < len(self.gates):
            raise GraphFormatError(f"output gate {self.output} out of range")

    @property
    def size(self) -> int:
        return len(self.gates)


def parse_circuit(text: str) -> MonotoneCircuit:
    """Parse `g <id> const0|const1|and <i> <j>|or <i> <j>` lines plus `out <id>`."""
    gates = {}
    output = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "g":
                gid = int(parts[1])
                op = parts[2]
                if op in (CONST0, CONST1):
                    if len(parts) != 3:
                        raise GraphFormatError(f"line {lineno}: constant gate takes no inputs")
                    gates[gid] = (op,)
                elif op in (AND, OR):
                    if len(parts) != 5:
                        raise GraphFormatError(f"line {lineno}: {op} gate needs two inputs")
                    gates[gid] = (op, int(parts[3]), int(parts[4]))
                else:
                    raise GraphFormatError(f"line {lineno}: unknown op {op!r}")
            elif parts[0] == "out":
                if output is not None:
                    raise GraphFormatError(f"line {lineno}: duplicate output")
                output = int(parts[1])
            else:
                raise GraphFormatError(f"line {lineno}: unknown directive {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"line {lineno}: cannot parse {line!r}") from exc
    if output is None:
        raise GraphFormatError("missing 'out' line")
    if sorted(gates) != list(range(len(gates))):
        raise GraphFormatError("gate ids must be 0..k-1 with no gaps")
    return MonotoneCircuit(tuple(gates[k] for k in range(len(gates))), output)


def format_circuit(c: MonotoneCircuit) -> str:
    lines = []
    for k, gate in enumerate(c.gates):
        if gate[0] in (CONST0, CONST1):
            lines.append(f"g {k} {gate[0]}")
        else:
            lines.append(f"g {k} {gate[0]} {gate[1]} {gate[2]}")
    lines.append(f"out {c.output}")
    return "\n".join(lines) + "\n"


def evaluate_all(c: MonotoneCircuit) -> list:
    vals = []
    for gate in c.gates:
        if gate[0] == CONST0:
            vals.append(False)
        elif gate[0] == CONST1:
            vals.append(True)
        elif gate[0] == AND:
            vals.append(vals[gate[1]] and vals[gate[2]])
        else:
            vals.append(vals[gate[1]] or vals[gate[2]])
    return vals


def evaluate(c: MonotoneCircuit) -> bool:
    return evaluate_all(c)[c.output]


@dataclass(frozen=True)
class GadgetRecord:
    kind: str  # "cfi" for and-gates, "imp" for or-gate halves and the Gpp tail
    gate: int  # consumer gate id (or the extra pair id for the Gpp tail)
    input_pairs: tuple  # pair ids feeding the gadget
    output_pair: int
    f_vertices: tuple  # the 4-vertex connector class
    prime_pairs: tuple  # ((P' vertices), (P'' vertices)) for imp gadgets, else ()


@dataclass(frozen=True)
class ReductionOutput:
    graph: ColoredGraph
    variant: str
    pair_map: tuple  # pair id -> (a, b) vertex pair; gate pairs first
    gadgets: tuple


class _Builder:
    def __init__(self):
        self.edges = {}  # (u, v) with u < v -> multiplicity
        self.colors = []

    def add_edge(self, u, v, w=1):
        # a gate wired to the same input twice yields parallel edges; fold
        # them into the multiplicity
        key = (u, v) if u < v else (v, u)
        self.edges[key] = self.edges.get(key, 0) + w

    def edge_list(self):
        return [(u, v, w) for (u, v), w in self.edges.items()]

    def new_class(self, size):
        color = (max(self.colors) + 1) if self.colors else 0
        first = len(self.colors)
        self.colors.extend([color] * size)
        return tuple(range(first, first + size))

    def new_pair(self, split=False):
        if not split:
            return self.new_class(2)
        a = self.new_class(1)[0]
        b = self.new_class(1)[0]
        return (a, b)

    def cfi(self, pi, pj, pk):
        """Four connector vertices e_xy, each adjacent to pi[x], pj[y], pk[x^y]."""
        f = self.new_class(4)
        for x in (0, 1):
            for y in (0, 1):
                e = f[2 * x + y]
                self.add_edge(e, pi[x])
                self.add_edge(e, pj[y])
                self.add_edge(e, pk[x ^ y])
        return f

    def imp(self, p_in, p_out):
        """Implication gadget: CFI on two auxiliary pairs tied to p_in by double edges."""
        prime = self.new_pair()
        dprime = self.new_pair()
        f = self.cfi(prime, dprime, p_out)
        for x in (0, 1):
            self.add_edge(prime[x], p_in[x], 2)
            self.add_edge(dprime[x], p_in[x], 2)
        return f, prime, dprime


def reduce_circuit(c: MonotoneCircuit, variant: str = "Gpp") -> ReductionOutput:
    """Deterministic reduction of a monotone circuit to a vertex-colored graph.

    Gates must have two distinct inputs: wiring a parity gadget onto the same
    pair twice creates twin connector vertices that refinement can never
    separate. Rewrite and(x, x) or or(x, x) as a wire before reducing."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    for k, gate in enumerate(c.gates):
        if gate[0] in (AND, OR) and gate[1] == gate[2]:
            raise ValueError(f"gate {k}: reduction needs distinct inputs")
    b = _Builder()
    pairs = [b.new_pair(split=(gate[0] == CONST1)) for gate in c.gates]
    gadgets = []
    for k, gate in enumerate(c.gates):
        if gate[0] == AND:
            i, j = gate[1], gate[2]
            f = b.cfi(pairs[i], pairs[j], pairs[k])
            gadgets.append(GadgetRecord("cfi", k, (i, j), k, f, ()))
        elif gate[0] == OR:
            for inp in (gate[1], gate[2]):
                f, prime, dprime = b.imp(pairs[inp], pairs[k])
                gadgets.append(GadgetRecord("imp", k, (inp,), k, f, (prime, dprime)))
    if variant in ("Gp", "Gpp"):
        out_pair = pairs[c.output]
        for k, gate in enumerate(c.gates):
            if gate[0] == CONST0 and k != c.output:
                b.add_edge(out_pair[0], pairs[k][0], 2)
                b.add_edge(out_pair[1], pairs[k][1], 2)
    if variant == "Gpp":
        extra = b.new_pair()
        pairs.append(extra)
        f, prime, dprime = b.imp(pairs[c.output], extra)
        gadgets.append(GadgetRecord("imp", len(pairs) - 1, (c.output,),
                                    len(pairs) - 1, f, (prime, dprime)))
    graph = ColoredGraph.from_edges(len(b.colors), b.edge_list(), b.colors)
    return ReductionOutput(graph, variant, tuple(pairs), tuple(gadgets))


def verify_gate_propagation(out: ReductionOutput, c: MonotoneCircuit) -> bool:
    """Refinement splits gate k's pair exactly when gate k evaluates to 1
    (checked at the fixpoint, on the plain `G` variant)."""
    if out.variant != "G":
        raise ValueError("gate propagation is checked on the plain variant")
    part, _ = stable_partition(out.graph)
    values = evaluate_all(c)
    for k in range(c.size):
        a, b_ = out.pair_map[k]
        if (part.class_of[a] != part.class_of[b_]) != values[k]:
            return False
    return True


def cfi_gadget_graph() -> ColoredGraph:
    """Standalone parity gadget: three colored pairs plus the connector class."""
    b = _Builder()
    p1, p2, p3 = b.new_pair(), b.new_pair(), b.new_pair()
    b.cfi(p1, p2, p3)
    return ColoredGraph.from_edges(len(b.colors), b.edge_list(), b.colors)


def cfi_pair_flips(perm, pair) -> bool:
    a, b = pair
    return perm[a] == b and perm[b] == a


def separating_graph() -> tuple:
    """Two parity gadgets sharing their input pairs: refinable, but a wrong
    pair of individualization choices makes the Tinhofer procedure fail.
    Returns (graph, pairs (P1..P4), connector classes (F, F'))."""
    b = _Builder()
    p1, p2 = b.new_pair(), b.new_pair()
    p3, p4 = b.new_pair(), b.new_pair()
    f = b.cfi(p1, p2, p3)
    fp = b.cfi(p1, p2, p4)
    graph = ColoredGraph.from_edges(len(b.colors), b.edge_list(), b.colors)
    return graph, (p1, p2, p3, p4), (f, fp)
