"""Two-cycle sign-reversal protocols.

Running a second field period with the static detuning, transverse coupling
and Ising constant all negated hands every eigenpath of the first cycle to an
eigenpath of the reversed Hamiltonian with the opposite energy, so the
dynamical phases cancel and the net slow-cycle transformation is the purely
geometric diagonal gate diag(e^{2i g1}, e^{2i g2}, e^{2i g3}, 1) in the
eigenbasis. Negating the rotation rate as well makes the rotating-frame
generator of the second cycle the exact negative of the first, which cancels
the total phase: the composed propagator is the identity for any input state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Operator4, SpinParams, TwoSpinState
from .evolution import evolve_exact, evolve_stepped, exact_propagator
from .phases import aa_breakdown, berry_phase
from .spectral import eigensystem

__all__ = [
    "AA_FLIP_SET",
    "ADIABATIC_FLIP_SET",
    "AATwoCycleResult",
    "AdiabaticTwoCycleResult",
    "BerryGate",
    "CycleProtocol",
    "CycleSegment",
    "aa_protocol",
    "adiabatic_protocol",
    "berry_gate",
    "flip_params",
    "one_cycle_dynamical_residual",
    "run_aa_two_cycle",
    "run_adiabatic_two_cycle",
]

# Parameter sign groups reversed in the second cycle.
ADIABATIC_FLIP_SET = frozenset({"omega0", "gamma", "J"})
AA_FLIP_SET = frozenset({"omega0", "omega1", "gamma", "J"})

_FLIP_FIELDS = {
    "omega0": ("omega_a0", "omega_b0"),
    "gamma": ("gamma_a", "gamma_b"),
    "J": ("J",),
    "omega1": ("omega1",),
}


def flip_params(params: SpinParams, names) -> SpinParams:
    """Negate the named parameter groups (omega0 and gamma act on both spins)."""
    updates = {}
    for name in names:
        if name not in _FLIP_FIELDS:
            raise ValueError(f"unknown flip group {name!r}")
        for field in _FLIP_FIELDS[name]:
            updates[field] = -getattr(params, field)
    return params.replace(**updates)


@dataclass(frozen=True)
class CycleSegment:
    params: SpinParams
    duration: float
    flipped: frozenset


@dataclass(frozen=True)
class CycleProtocol:
    """Two consecutive field periods; the second with a sign-reversal set."""

    segments: tuple[CycleSegment, ...]

    def __post_init__(self):
        if len(self.segments) != 2:
            raise ValueError("a protocol has exactly two segments")
        first, second = self.segments
        if first.flipped != frozenset():
            raise ValueError("the first segment carries no sign flips")
        if second.flipped not in (ADIABATIC_FLIP_SET, AA_FLIP_SET):
            raise ValueError(f"unsupported flip set {set(second.flipped)!r}")
        for seg in self.segments:
            if seg.duration != seg.params.period:
                raise ValueError("segment duration must be one period of its own parameters")

    @property
    def scheme(self) -> str:
        return "adiabatic" if self.segments[1].flipped == ADIABATIC_FLIP_SET else "aa"


def _protocol(params: SpinParams, flips: frozenset) -> CycleProtocol:
    if params.omega1 == 0.0:
        raise ValueError("cycle protocols need omega1 != 0")
    second = flip_params(params, flips)
    return CycleProtocol(
        segments=(
            CycleSegment(params, params.period, frozenset()),
            CycleSegment(second, second.period, flips),
        )
    )


def adiabatic_protocol(params: SpinParams) -> CycleProtocol:
    """Second cycle with omega0, gamma and J reversed (dynamical phases cancel)."""
    return _protocol(params, ADIABATIC_FLIP_SET)


def aa_protocol(params: SpinParams) -> CycleProtocol:
    """Second cycle with omega0, omega1, gamma and J reversed (total phase cancels)."""
    return _protocol(params, AA_FLIP_SET)


@dataclass(frozen=True)
class BerryGate:
    """Purely geometric two-cycle gate, diagonal in the t=0 eigenbasis."""

    phases: tuple[float, float, float, float]
    in_eigenbasis: Operator4
    in_computational: Operator4


def berry_gate(omega0: float, gamma: float, J: float) -> BerryGate:
    """Ideal slow-limit gate of the adiabatic two-cycle protocol.

    Eigenbasis entries are exp(2i * geometric phase); the fourth entry is
    exactly 1. The computational-basis matrix conjugates the diagonal with the
    eigenvector matrix at t=0.
    """
    phases = tuple(berry_phase(omega0, gamma, J, n) for n in (1, 2, 3, 4))
    diag = np.diag(np.exp(2j * np.asarray(phases)))
    basis = eigensystem(SpinParams.symmetric(omega0, gamma, J), 0.0).basis_matrix()
    computational = basis @ diag @ basis.conj().T
    return BerryGate(
        phases=phases,
        in_eigenbasis=Operator4.unitary(diag),
        in_computational=Operator4.unitary(computational),
    )


@dataclass(frozen=True)
class AdiabaticTwoCycleResult:
    final_state: TwoSpinState
    ideal_state: TwoSpinState
    deviation: float


def run_adiabatic_two_cycle(
    params: SpinParams, initial: TwoSpinState, steps_per_cycle: int | None = None
) -> AdiabaticTwoCycleResult:
    """Simulate both cycles of the adiabatic protocol and compare to the gate.

    The parameter reversal happens instantaneously between the cycles; each
    cycle restarts the field at angle zero. deviation is the 2-norm distance
    between the simulated final state and berry_gate applied to the input; it
    vanishes in the slow-rotation limit.
    """
    protocol = adiabatic_protocol(params)
    state = initial
    for segment in protocol.segments:
        if steps_per_cycle is None:
            state = evolve_exact(segment.params, state, segment.duration).final_state
        else:
            state = evolve_stepped(segment.params, state, segment.duration, steps_per_cycle).final_state
    gate = berry_gate(params.omega0, params.gamma, params.J)
    ideal = TwoSpinState(gate.in_computational.matrix @ initial.amplitudes)
    deviation = float(np.linalg.norm(state.amplitudes - ideal.amplitudes))
    return AdiabaticTwoCycleResult(final_state=state, ideal_state=ideal, deviation=deviation)


@dataclass(frozen=True)
class AATwoCycleResult:
    final_state: TwoSpinState
    identity_defect: float


def run_aa_two_cycle(params: SpinParams, initial: TwoSpinState) -> AATwoCycleResult:
    """Compose the two exact cycle propagators of the total-phase protocol.

    identity_defect is the max-abs entry of U2 U1 - I; it sits at rounding
    level because the second rotating-frame generator is the exact negative of
    the first. The input state is arbitrary (not restricted to eigenstates).
    """
    protocol = aa_protocol(params)
    u_first = exact_propagator(protocol.segments[0].params, protocol.segments[0].duration)
    u_second = exact_propagator(protocol.segments[1].params, protocol.segments[1].duration)
    composed = u_second.matrix @ u_first.matrix
    defect = float(np.abs(composed - np.eye(4)).max())
    final = TwoSpinState(composed @ initial.amplitudes)
    return AATwoCycleResult(final_state=final, identity_defect=defect)


def one_cycle_dynamical_residual(params: SpinParams, n: int) -> float:
    """Dynamical phase left over after a single exact cycle on eigenpath n.

    Nonzero for the singlet whenever J != 0, which is why no single-cycle
    parameter choice can cancel the dynamical phases alone.
    """
    return aa_breakdown(params, n).dynamical
