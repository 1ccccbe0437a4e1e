"""PPO error types."""


class ContractError(ValueError):
    """Inputs violate an operation's preconditions (e.g. mismatched lengths)."""


class TrainingDivergedError(RuntimeError):
    """A parameter block, gradient or output became non-finite."""

    def __init__(self, block: str, where: str = "parameters"):
        self.block = block
        self.where = where
        super().__init__(f"Non-finite {where} in block '{block}'")
