"""多项式、传递函数与数值搜索工具"""
