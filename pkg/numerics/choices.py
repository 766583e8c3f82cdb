from django.db import models


class Encoding(models.TextChoices):
    IEEE754 = "ieee754", "Complex IEEE-754"
    COMMON = "common", "Common Exponent"
    BOX = "box", "Exponent Box"


class Operation(models.TextChoices):
    ADD = "add", "Block Addition"
    MUL = "mul", "Block Multiplication"
    CONV = "conv", "Convolution"


class Region(models.TextChoices):
    INSIDE = "inside", "Inside"
    OUTSIDE = "outside", "Outside"


# Encodings a CbfpBlock can carry
BLOCK_ENCODINGS = (Encoding.COMMON, Encoding.BOX)
