# graphs/exceptions.py
from django.core.exceptions import ValidationError


class GraphError(Exception):
    """ Raised for illegal operations on a multigraph (unknown vertex, bad contraction). """


class DrawingError(ValidationError):
    """ A drawing violates one of its invariants; the message names the offending id. """
