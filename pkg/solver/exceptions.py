# solver/exceptions.py


class LiftError(Exception):
    """ A b-factor could not be turned back into a consistent cut. """


class VerificationError(Exception):
    """ A reported cut value differs from the value recomputed on the graph. """

    def __init__(self, reported, recomputed):
        self.reported = reported
        self.recomputed = recomputed
        super().__init__(f"Reported value {reported} but the cut is worth {recomputed}.")


class OracleBoundError(Exception):
    """ An instance is too large for brute-force enumeration. """
