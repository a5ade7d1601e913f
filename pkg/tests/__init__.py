"""
polyaut のテストスイート
"""
