class HFOLError(Exception):
    """Base class for every error raised by the toolkit."""


class SignatureError(HFOLError):
    pass


class MorphismError(HFOLError):
    pass


class SentenceError(HFOLError):
    pass


class ModelError(HFOLError):
    pass


class PlanError(ModelError):
    """A replacement plan touches elements it is not allowed to touch."""


class AmalgamationError(ModelError):
    pass


class RelativizationError(ModelError):
    pass


class LiftError(HFOLError):
    """The lifting construction could not be carried out.

    ``code`` names the failed precondition so callers (and tests) can tell
    the cases apart without parsing the message.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
