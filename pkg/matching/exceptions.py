# matching/exceptions.py


class InfeasibleError(Exception):
    """ No b-factor, perfect matching or constrained cut exists for the instance. """
