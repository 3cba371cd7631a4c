"""Exception hierarchy; every error carries a machine-readable ``code``."""


class CycleError(Exception):
    code = "error"
    exit_status = 2

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        for key, value in self.details.items():
            out[key] = value
        return out


class ValidationError(CycleError, ValueError):
    code = "validation_error"


class MalformedInput(ValidationError):
    code = "malformed_input"


class DescriptorMismatch(ValidationError):
    code = "descriptor_mismatch"


class InconsistentGroups(ValidationError):
    code = "inconsistent_groups"


class NotInSubgroup(ValidationError):
    code = "not_in_normal_subgroup"


class NotACycle(ValidationError):
    code = "not_a_cycle"


class NonzeroPushforward(ValidationError):
    code = "nonzero_pushforward"


class FillingMismatch(ValidationError):
    code = "filling_mismatch"


class Infeasible(CycleError):
    code = "infeasible"
    exit_status = 3
