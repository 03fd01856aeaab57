"""SC and SC list decoding, with and without successive permutation.

The decoders walk the factor graph depth first, f before g, and keep every live
path in stacked numpy arrays (path on axis 0). Successive permutation (SP)
picks, on entry to every eligible node, the cyclic shift whose f outputs have
the largest summed magnitude; the node LLRs are gathered through that shift on
entry and the partial sums scattered back on exit, so f and g never see the
permutation.
"""
import enum
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from spdecoder.channel import clip_llrs
from spdecoder.channel import hard_decision
from spdecoder.code import check_crc
from spdecoder.code import encode
from spdecoder.code import extract_message
from spdecoder.permute import CyclicShift
from spdecoder.permute import PermState
from spdecoder.permute import candidate_shifts
from spdecoder.permute import shift_tables
from spdecoder.permute import sp_eligibility

# Below this magnitude the tanh form of f is free of saturation.
_TANH_SAFE = 15.0


class DecoderKind(enum.Enum):
    SC = 'sc'
    SCL = 'scl'
    SPSC = 'spsc'
    SPSCL = 'spscl'

    @property
    def is_list(self):
        return self in (DecoderKind.SCL, DecoderKind.SPSCL)

    @property
    def permutes(self):
        return self in (DecoderKind.SPSC, DecoderKind.SPSCL)


class FMode(enum.Enum):
    EXACT = 'exact'
    MINSUM = 'minsum'


class PmMode(enum.Enum):
    EXACT = 'exact'
    HARD = 'hard'


def f_exact(a, b):
    """2 artanh(tanh(a/2) tanh(b/2))

    Evaluated in the tanh form while one input is small and in the
    sign-magnitude log form min + ln(1+e^-(|a|+|b|)) - ln(1+e^-||a|-|b||)
    otherwise; the magnitude is clamped to [0, min(|a|, |b|)].
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    abs_a = np.abs(a)
    abs_b = np.abs(b)
    smallest = np.minimum(abs_a, abs_b)
    with np.errstate(over='ignore', divide='ignore', invalid='ignore'):
        direct = 2.0 * np.arctanh(
            np.tanh(np.minimum(abs_a, 2 * _TANH_SAFE) / 2.0)
            * np.tanh(np.minimum(abs_b, 2 * _TANH_SAFE) / 2.0))
        logform = (smallest + np.log1p(np.exp(-(abs_a + abs_b)))
                   - np.log1p(np.exp(-np.abs(abs_a - abs_b))))
    magnitude = np.where(smallest < _TANH_SAFE, direct, logform)
    magnitude = np.clip(magnitude, 0.0, smallest)
    return np.sign(a) * np.sign(b) * magnitude


def f_minsum(a, b):
    """sgn(a) sgn(b) min(|a|, |b|)"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def g(a, b, s):
    """b + (1 - 2s) a"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.where(np.asarray(s) != 0, b - a, b + a)


def f_kernel(f_mode):
    return f_exact if FMode(f_mode) is FMode.EXACT else f_minsum


def path_penalty(alpha, bit, pm_mode=PmMode.EXACT):
    """Path metric increment of deciding bit on a leaf LLR alpha

    exact: ln(1 + e^-(1-2u) alpha)
    hard: 0 when bit agrees with the sign of alpha, |alpha| otherwise
    """
    alpha = np.asarray(alpha, dtype=np.float64)
    bit = np.asarray(bit)
    if PmMode(pm_mode) is PmMode.EXACT:
        return np.logaddexp(0.0, -(1.0 - 2.0 * bit) * alpha)
    return np.where(hard_decision(alpha) == bit, 0.0, np.abs(alpha))


@dataclass(frozen=True)
class DecodeOptions:
    """Knobs shared by all four decoders

    :param f_mode: FMode of the f kernel
    :param pm_mode: PmMode of the path metric update
    :param float llr_clip: Saturate channel LLRs at this magnitude, None disables
    :param tuple sp_shifts: Restrict the SP candidates to these shifts
    :param bool collect_trace: Record a DecodeTrace and the surviving paths
    """
    f_mode: FMode = FMode.MINSUM
    pm_mode: PmMode = PmMode.EXACT
    llr_clip: float = None
    sp_shifts: tuple = None
    collect_trace: bool = False


@dataclass
class DecodeStats:
    """Operation counts of one decoded frame

    workspace_llrs and workspace_bits are per path and do not depend on SP.
    """
    f_ops: int = 0
    g_ops: int = 0
    sp_f_ops: int = 0
    workspace_llrs: int = 0
    workspace_bits: int = 0


@dataclass
class LeafRecord:
    position: int
    frozen: bool
    parents: np.ndarray
    parent_metrics: np.ndarray
    metrics: np.ndarray


@dataclass
class SelectionRecord:
    """Shift selection at one node: entering LLRs and objectives per path"""
    layer: int
    offset: int
    alphas: np.ndarray
    candidates: tuple
    objectives: np.ndarray
    chosen: np.ndarray


@dataclass
class DecodeTrace:
    leaves: list = field(default_factory=list)
    selections: list = field(default_factory=list)


class DecodeWorkspace:
    """Per-layer LLR and partial-sum scratch of the live paths

    alpha[m] has shape (paths, 2^m) and holds the LLRs of the node of layer m
    on the current root-to-leaf branch. beta_left[m] keeps the partial sums
    returned by the left child of that node while its right child is decoded.
    """

    def __init__(self, alpha, beta_left):
        self.alpha = alpha
        self.beta_left = beta_left

    @classmethod
    def allocate(cls, n, channel_llrs):
        alpha = [np.zeros((1, 1 << m)) for m in range(n + 1)]
        alpha[n] = np.asarray(channel_llrs, dtype=np.float64)[None, :].copy()
        beta_left = [np.zeros((1, (1 << m) >> 1), dtype=np.uint8) for m in range(n + 1)]
        return cls(alpha, beta_left)

    def select(self, parents):
        self.alpha = [layer[parents] for layer in self.alpha]
        self.beta_left = [layer[parents] for layer in self.beta_left]

    def path(self, index):
        return DecodeWorkspace(
            [layer[index:index + 1].copy() for layer in self.alpha],
            [layer[index:index + 1].copy() for layer in self.beta_left],
        )

    @property
    def llrs_per_path(self):
        return sum(layer.shape[1] for layer in self.alpha)

    @property
    def bits_per_path(self):
        return sum(layer.shape[1] for layer in self.beta_left)


@dataclass
class DecodePath:
    """One list hypothesis, decisions in decode order"""
    workspace: DecodeWorkspace
    decisions: np.ndarray
    metric: float
    perm: PermState
    id: int


class PathList:
    """The live paths of a decoder, stacked"""

    def __init__(self, n, channel_llrs):
        N = 1 << n
        self.workspace = DecodeWorkspace.allocate(n, channel_llrs)
        self.decisions = np.zeros((1, N), dtype=np.uint8)
        self.metrics = np.zeros(1)
        self.perm = PermState.identity(n)
        self.ids = np.zeros(1, dtype=np.int64)
        self.next_id = 1

    def __len__(self):
        return self.metrics.size

    def fork_ids(self):
        """Ids of the two children of every path, flattened per parent

        The child agreeing with the hard decision keeps the id of its parent,
        the other one gets an id above every id handed out so far.
        """
        fresh = np.arange(self.next_id, self.next_id + len(self))
        self.next_id += len(self)
        return np.stack([self.ids, fresh], axis=1).ravel()

    def select(self, parents, ids):
        """Keeps the listed parents under the given path ids"""
        self.workspace.select(parents)
        self.perm.select(parents)
        self.decisions = self.decisions[parents]
        self.ids = np.asarray(ids, dtype=np.int64)

    def ranking(self):
        """Path indices by ascending metric, ties to the smaller id"""
        return np.lexsort((self.ids, self.metrics))

    def original_order(self):
        """Decisions scattered through each path's leaf map, (paths, N)"""
        u = np.zeros_like(self.decisions)
        np.put_along_axis(u, self.perm.leaf_map, self.decisions, axis=1)
        return u

    def path(self, index):
        return DecodePath(
            self.workspace.path(index),
            self.decisions[index].copy(),
            float(self.metrics[index]),
            self.perm.path(index),
            int(self.ids[index]),
        )


@dataclass
class DecodeResult:
    """Outcome of decoding one frame

    u_hat is in original index order, chosen_shifts lists (layer, offset,
    shift) of the returned path and list_metrics the final metric of every
    surviving path in ascending order.
    """
    u_hat: np.ndarray
    x_hat: np.ndarray
    metric: float
    chosen_shifts: list
    list_metrics: np.ndarray
    crc_passed: bool = None
    stats: DecodeStats = None
    trace: DecodeTrace = None
    survivors: list = None


def _shift_objectives(f, alphas, candidates, layer):
    """Summed |f| of every candidate shift, shape (paths, candidates)"""
    half = 1 << (layer - 1)
    tables = shift_tables(layer)[list(candidates)]
    permuted = alphas[:, tables]
    return np.abs(f(permuted[..., :half], permuted[..., half:])).sum(axis=-1)


def sp_select(alphas, eligible=True, candidates=None, f_mode=FMode.MINSUM):
    """The cyclic shift maximizing the reliability of the f outputs

    Ties go to the identity, then to the smallest shift.

    :param alphas: LLRs entering a node, length 2^m
    :param bool eligible: Whether SP may act on this node
    :param candidates: Shifts to try, all m rotations by default
    :param f_mode: f kernel used in the objective
    :returns CyclicShift: The selected shift
    """
    alphas = np.asarray(alphas, dtype=np.float64)
    layer = alphas.size.bit_length() - 1
    if alphas.size != 1 << layer:
        raise ValueError(f'expected 2^m LLRs, got {alphas.size}')
    if not eligible or layer < 2:
        return CyclicShift(layer, 0)
    candidates = candidate_shifts(layer, candidates)
    objectives = _shift_objectives(f_kernel(f_mode), alphas[None, :], candidates, layer)[0]
    return CyclicShift(layer, candidates[int(np.argmax(objectives))])


class _SuccessiveCancellation:
    """Depth-first SC/SCL engine; a list size of one gives plain SC"""

    def __init__(self, code, list_size, opts, permute, forced_u=None):
        if list_size < 1:
            raise ValueError(f'list size must be >= 1, got {list_size}')
        self.code = code
        self.n = code.n
        self.list_size = list_size if forced_u is None else 1
        self.opts = opts
        self.f = f_kernel(opts.f_mode)
        self.pm_mode = PmMode(opts.pm_mode)
        self.frozen = code.frozen_mask
        self.eligible = sp_eligibility(code).eligible if permute else None
        self.forced_u = None if forced_u is None else np.asarray(forced_u, dtype=np.uint8)
        self.stats = DecodeStats()
        self.trace = DecodeTrace() if opts.collect_trace else None
        self.paths = None

    def run(self, frame):
        if frame.alpha.size != self.code.N:
            raise ValueError(f'frame of {frame.alpha.size} LLRs for {self.code}')
        if self.opts.llr_clip is not None:
            frame = clip_llrs(frame, self.opts.llr_clip)
        self.paths = PathList(self.n, frame.alpha)
        self.stats.workspace_llrs = self.paths.workspace.llrs_per_path
        self.stats.workspace_bits = self.paths.workspace.bits_per_path
        self._node(self.n, 0, 1)
        return self._result()

    def _node(self, layer, offset, node):
        if layer == 0:
            return self._leaf(offset)
        ws = self.paths.workspace
        half = 1 << (layer - 1)
        permuted = self.eligible is not None and layer >= 2 and self.eligible[node]
        if permuted:
            self._permute_entry(layer, offset, node)
        a = ws.alpha[layer]
        ws.alpha[layer - 1] = self.f(a[:, :half], a[:, half:])
        self.stats.f_ops += a.shape[0] * half
        ws.beta_left[layer] = self._node(layer - 1, offset, 2 * node)
        # forks inside the left child reorder the paths, reload
        a = ws.alpha[layer]
        ws.alpha[layer - 1] = g(a[:, :half], a[:, half:], ws.beta_left[layer])
        self.stats.g_ops += a.shape[0] * half
        beta_right = self._node(layer - 1, offset + half, 2 * node + 1)
        beta = np.concatenate([ws.beta_left[layer] ^ beta_right, beta_right], axis=1)
        if permuted:
            beta = np.take_along_axis(beta, self.paths.perm.exit_index(layer), axis=1)
        return beta

    def _permute_entry(self, layer, offset, node):
        ws = self.paths.workspace
        candidates = candidate_shifts(layer, self.opts.sp_shifts)
        a = ws.alpha[layer]
        objectives = _shift_objectives(self.f, a, candidates, layer)
        self.stats.sp_f_ops += a.shape[0] * len(candidates) * (1 << (layer - 1))
        choice = np.argmax(objectives, axis=1)
        rows = np.arange(a.shape[0])
        if candidates[0] == 0:
            assert np.all(objectives[rows, choice] >= objectives[:, 0])
        shifts = np.asarray(candidates)[choice]
        index = self.paths.perm.enter_node(layer, offset, node, shifts)
        ws.alpha[layer] = np.take_along_axis(a, index, axis=1)
        if self.trace is not None:
            self.trace.selections.append(
                SelectionRecord(layer, offset, a, candidates, objectives, shifts))

    def _leaf(self, position):
        paths = self.paths
        llr = paths.workspace.alpha[0][:, 0]
        parent_metrics = paths.metrics
        frozen = bool(self.frozen[position])
        if self.forced_u is not None:
            bits = self.forced_u[paths.perm.leaf_map[:, position]]
            parents = np.arange(len(paths))
            metrics = parent_metrics + path_penalty(llr, bits, self.pm_mode)
        elif frozen:
            bits = np.zeros(len(paths), dtype=np.uint8)
            parents = np.arange(len(paths))
            metrics = parent_metrics + path_penalty(llr, bits, self.pm_mode)
        else:
            # per parent: the candidate agreeing with the hard decision first
            hard = hard_decision(llr)
            candidate_bits = np.stack([hard, 1 - hard], axis=1).ravel()
            candidate_parents = np.repeat(np.arange(len(paths)), 2)
            candidate_metrics = parent_metrics[candidate_parents] + path_penalty(
                llr[candidate_parents], candidate_bits, self.pm_mode)
            candidate_ids = paths.fork_ids()
            keep = np.arange(candidate_bits.size)
            if keep.size > self.list_size:
                # ties go to the older path
                keep = np.lexsort((candidate_ids, candidate_metrics))[:self.list_size]
            parents = candidate_parents[keep]
            bits = candidate_bits[keep]
            metrics = candidate_metrics[keep]
            paths.select(parents, candidate_ids[keep])
        paths.metrics = metrics
        paths.decisions[:, position] = bits
        if self.trace is not None:
            self.trace.leaves.append(
                LeafRecord(position, frozen, parents, parent_metrics[parents], metrics))
        return bits[:, None].astype(np.uint8)

    def _result(self):
        paths = self.paths
        code = self.code
        order = paths.ranking()
        u_all = paths.original_order()
        chosen = int(order[0])
        crc_passed = None
        if code.crc is not None and self.forced_u is None:
            crc_passed = False
            for index in order:
                if check_crc(code, extract_message(code, u_all[index])):
                    chosen = int(index)
                    crc_passed = True
                    break
        u_hat = u_all[chosen]
        survivors = None
        if self.opts.collect_trace:
            survivors = [paths.path(int(index)) for index in order]
        return DecodeResult(
            u_hat=u_hat,
            x_hat=encode(code, u_hat),
            metric=float(paths.metrics[chosen]),
            chosen_shifts=paths.perm.chosen_shifts(chosen),
            list_metrics=paths.metrics[order].copy(),
            crc_passed=crc_passed,
            stats=self.stats,
            trace=self.trace,
            survivors=survivors,
        )


def decode_sc(code, frame, opts=None):
    """Successive cancellation: u_i = 0 on frozen positions or when alpha_i >= 0"""
    return _SuccessiveCancellation(code, 1, opts or DecodeOptions(), permute=False).run(frame)


def decode_scl(code, frame, list_size, opts=None):
    """SC list decoding keeping the list_size smallest path metrics

    With a CRC the answer is the best CRC-passing path, the best path overall
    when none passes.
    """
    return _SuccessiveCancellation(
        code, list_size, opts or DecodeOptions(), permute=False).run(frame)


def decode_spsc(code, frame, opts=None):
    """SC decoding on a factor graph permuted node by node"""
    return _SuccessiveCancellation(code, 1, opts or DecodeOptions(), permute=True).run(frame)


def decode_spscl(code, frame, list_size, opts=None):
    """SC list decoding where every path picks its own shifts"""
    return _SuccessiveCancellation(
        code, list_size, opts or DecodeOptions(), permute=True).run(frame)


def decode(code, frame, kind, list_size=1, opts=None):
    """Dispatches to one of the four decoders

    :param CodeSpec code: The code
    :param LlrFrame frame: Channel LLRs
    :param kind: DecoderKind or its value
    :param int list_size: Ignored by SC and SPSC
    :param DecodeOptions opts: Decoder options
    """
    kind = DecoderKind(kind)
    size = list_size if kind.is_list else 1
    return _SuccessiveCancellation(
        code, size, opts or DecodeOptions(), permute=kind.permutes).run(frame)


def decode_genie(code, frame, u, kind, opts=None):
    """Single path forced along the input vector u

    The metric of the result is the one the transmitted sequence accumulates
    under the given decoder, its own permutation choices included.
    """
    kind = DecoderKind(kind)
    return _SuccessiveCancellation(
        code, 1, opts or DecodeOptions(), permute=kind.permutes, forced_u=u).run(frame)


def format_diagnostics(result):
    """Line oriented dump: `shift <layer> <offset> <shift>` then `pm <rank> <metric>`"""
    lines = [f'shift {layer} {offset} {shift}' for layer, offset, shift in result.chosen_shifts]
    lines += [f'pm {rank} {metric!r}' for rank, metric in enumerate(result.list_metrics.tolist())]
    return '\n'.join(lines) + '\n'


def parse_diagnostics(text):
    """Inverse of format_diagnostics

    :returns dict: {'shifts': [(layer, offset, shift), ...], 'metrics': [float, ...]}
    """
    shifts = []
    metrics = []
    for line in text.splitlines():
        kind, *values = line.split()
        if kind == 'shift':
            shifts.append(tuple(int(v) for v in values))
        elif kind == 'pm':
            metrics.append(float(values[1]))
    return {'shifts': shifts, 'metrics': metrics}
