"""Custom exceptions for the wecsim simulator."""


class WecsimError(Exception):
    """Base exception for all wecsim errors."""
    pass


class DomainError(WecsimError, ValueError):
    """
    Raised when a model function is evaluated outside its mathematical domain.

    This typically indicates:
    - Wind speed v <= 0 passed to a tip-speed-ratio or power evaluation
    - Tip-speed ratio lambda <= 0 passed to the torque expression
    - A stalled rotor reaching the aerodynamic model

    Resolution:
    - Keep wind profiles inside the cut-in/rated bracket
    - Start simulations at a positive rotor speed (drivetrain.lambda_init)
    """
    pass


class ConfigurationError(WecsimError):
    """
    Raised when a scenario is structurally malformed.

    This typically indicates:
    - Unknown keys in a scenario JSON object
    - A value of the wrong type (string where a number is expected)
    - Unreadable or non-JSON scenario file

    Resolution:
    - Compare the file against `wecsim example` output
    - Check spelling of parameter names
    """
    pass


class ScenarioValidationError(ConfigurationError):
    """
    Raised when running a scenario whose parameters violate an invariant.

    Carries the complete list of violations produced by
    :func:`wecsim.scenario.validate`, one human-readable string per problem.

    Resolution:
    - Fix every listed field; validation reports all problems at once
    """

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        joined = "; ".join(self.violations)
        super().__init__(f"Scenario has {len(self.violations)} violation(s): {joined}")


class NumericalError(WecsimError):
    """
    Raised when the integration produces a non-finite or infeasible state.

    This typically indicates:
    - Step size too large for the stiffest loop (boost LC, hysteresis slew)
    - Rotor stall (omega reached zero)
    - Unstable controller gains

    Resolution:
    - Reduce solver.dt_plant
    - Review PI gains against the plant parameters
    """

    def __init__(self, channel: str, time: float, reason: str = "non-finite value"):
        self.channel = channel
        self.time = time
        self.reason = reason
        super().__init__(f"{reason} in channel '{channel}' at t={time:.6f} s")


class DcLinkCollapseError(NumericalError):
    """
    Raised when the DC-link voltage drops below the line-to-line grid peak.

    Below sqrt(3)·E_grid the inverter cannot synthesize the grid line voltages
    and current control is lost.

    Resolution:
    - Raise control.v_o_ref or converter.C_dc
    - Slow the DC-link PI (lower kp/ki) if it rings
    """

    def __init__(self, time: float, v_o: float, v_min: float):
        self.v_o = v_o
        self.v_min = v_min
        super().__init__(
            "v_o",
            time,
            reason=f"DC link collapsed to {v_o:.1f} V (minimum {v_min:.1f} V)",
        )


class OperatingPointError(WecsimError):
    """
    Raised when no steady state exists for a frozen input.

    This typically indicates:
    - A rotor speed whose aerodynamic power the bridge cannot absorb
    - A rectifier voltage of zero or below

    Resolution:
    - Narrow the sweep grid to the feasible region
    """
    pass


class TraceError(WecsimError):
    """
    Raised when a trace is missing a requested channel or is malformed.

    Attributes:
        available: Channel names present in the trace
    """

    def __init__(self, message: str, available: list[str] | None = None):
        self.available = list(available or [])
        super().__init__(message)
