"""分析服务"""
