"""klgrowth - Kazhdan-Lusztig combinatorics of affine Weyl groups and Ext growth statistics."""

__version__ = "0.1.0"
