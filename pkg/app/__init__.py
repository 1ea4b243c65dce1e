"""PI Tuning Toolkit"""
