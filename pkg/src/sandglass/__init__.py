"""Verification and construction toolkit for recovering and cancellative pairs."""

__version__ = "0.1.0"
