""" ``utils`` module.
"""


def positive(value):
    """Returns ``value`` as a positive int.

    ``value`` can be int:

    >>> positive(10)
    10

    or a string of digits (as it comes from a command line):

    >>> positive('8')
    8

    otherwise raise ``TypeError``.

    >>> positive(1.5) # doctest: +ELLIPSIS
    Traceback (most recent call last):
        ...
    TypeError: ...

    Zero and negative numbers raise ``ValueError``.

    >>> positive(0) # doctest: +ELLIPSIS
    Traceback (most recent call last):
        ...
    ValueError: ...
    """
    if isinstance(value, bool):
        raise TypeError("Expecting type int, got bool")
    if isinstance(value, str) and value.isdigit():
        value = int(value)
    if not isinstance(value, int):
        raise TypeError("Expecting type int or a string of digits")
    if value < 1:
        raise ValueError("Expecting a positive number, got %d" % value)
    return value
