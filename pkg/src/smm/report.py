from dataclasses import dataclass, field


@dataclass(frozen=True)
class MembershipReport:
    """Outcome of a membership test.

    ``residuals`` maps a check name to its raw residual and ``bounds`` to the
    threshold it was compared against; the report is truthy iff every
    residual is within its bound.
    """

    residuals: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.residuals[key] <= self.bounds[key] for key in self.residuals)

    def __bool__(self):
        return self.passed

    def failures(self):
        return [k for k in self.residuals if self.residuals[k] > self.bounds[k]]

    def lines(self):
        """``key=value`` lines for command-line output."""
        out = [f"passed={str(self.passed).lower()}"]
        for key in self.residuals:
            out.append(f"{key}.residual={self.residuals[key]:.17g}")
            out.append(f"{key}.bound={self.bounds[key]:.17g}")
        return out
