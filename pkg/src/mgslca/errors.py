"""Exception type shared by every module.

Each error carries a machine-readable ``code`` so callers (and the CLI) can
branch on the failure kind without parsing messages.
"""


class LcaError(Exception):
    def __init__(self, code: str, message: str = ""):
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}" if message else code)
