"""Two-drive membrane-in-the-middle optomechanical cooling."""
__version__ = "0.1.0"
