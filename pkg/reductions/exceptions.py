# reductions/exceptions.py


class GadgetError(Exception):
    """ A surgery was asked for on an instance that does not meet its precondition. """
